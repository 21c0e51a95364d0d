#include "modlab/bvsymbol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace modlab {

BVFunction::BVFunction(std::vector<double> breakpoints, std::vector<Expression> pieces, double x, double scale)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), x_(x), scale_(scale) {
    if (pieces_.size() != breakpoints_.size() + 1)
        throw std::invalid_argument("a BV function needs exactly one more piece than breakpoints");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i])) throw std::invalid_argument("breakpoints must be finite");
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    }
}

BVFunction::BVFunction(Expression piece, double x, double scale)
    : BVFunction({}, std::vector<Expression>{std::move(piece)}, x, scale) {}

std::size_t BVFunction::piece_index(double lambda) const noexcept {
    // first breakpoint >= lambda owns it: pieces are (b_{k-1}, b_k]
    return static_cast<std::size_t>(std::lower_bound(breakpoints_.begin(), breakpoints_.end(), lambda) -
                                    breakpoints_.begin());
}

double BVFunction::piece_value(std::size_t k, double lambda) const { return scale_ * pieces_[k](x_, lambda); }

double BVFunction::operator()(double lambda) const { return piece_value(piece_index(lambda), lambda); }

double BVFunction::right_limit(double lambda) const {
    const auto k = static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lambda) -
                                            breakpoints_.begin());
    return piece_value(k, lambda);
}

namespace {

struct SegmentStats {
    double variation = 0.0;
    double sup = 0.0;
};

enum class Side { finite, left_tail, right_tail };

// Point at fraction s of one segment. For tails, `anchor` is the finite end
// and points spread on an exponential ladder out to log1p(span) = umax.
double sample_point(Side side, double lo, double hi, double anchor, double umax, double s) {
    switch (side) {
        case Side::finite: return s >= 1.0 ? hi : lo + (hi - lo) * s;
        case Side::left_tail: return anchor - std::expm1(umax * s);
        case Side::right_tail: return anchor + std::expm1(umax * s);
    }
    return lo;
}

SegmentStats analyze_segment(const BVFunction& g, std::size_t piece, double lo, double hi, const VariationOptions& opt) {
    Side side = Side::finite;
    double anchor = 0.0;
    double span = 0.0;
    if (std::isinf(lo)) {
        side = Side::left_tail;
        anchor = hi;
        span = std::max(hi + opt.lambda_max, 1.0);
    } else if (std::isinf(hi)) {
        side = Side::right_tail;
        anchor = lo;
        span = std::max(opt.lambda_max - lo, 1.0);
    }
    const double umax = std::log1p(span);
    auto value_at = [&](double s) { return g.piece_value(piece, sample_point(side, lo, hi, anchor, umax, s)); };

    // Golden-section search for the extreme value between two samples, so a
    // smooth interior extremum is not clipped by the sampling.
    auto refine_extremum = [&](double a, double b, double sign) {
        constexpr double r = 0.6180339887498949;
        double c = b - r * (b - a), d = a + r * (b - a);
        double fc = sign * value_at(c), fd = sign * value_at(d);
        for (int it = 0; it < 50; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = sign * value_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = sign * value_at(d);
            }
        }
        return sign * std::max(fc, fd);
    };

    auto run = [&](std::size_t N, std::vector<double>* partial) {
        const double inv = 1.0 / static_cast<double>(N);
        std::vector<double> v(N + 1);
        for (std::size_t i = 0; i <= N; ++i) v[i] = value_at(static_cast<double>(i) * inv);
        std::vector<double> w = v;
        for (std::size_t i = 1; i < N; ++i) {
            const double left = v[i] - v[i - 1], right = v[i + 1] - v[i];
            if (left * right < 0.0) {
                const double sign = left > 0.0 ? 1.0 : -1.0;
                const double e = refine_extremum(static_cast<double>(i - 1) * inv, static_cast<double>(i + 1) * inv, sign);
                if (sign * e > sign * v[i]) w[i] = e;
            }
        }
        SegmentStats st;
        st.sup = std::abs(w[0]);
        if (partial) partial->assign(N + 1, 0.0);
        for (std::size_t i = 1; i <= N; ++i) {
            st.variation += std::abs(w[i] - w[i - 1]);
            st.sup = std::max(st.sup, std::abs(w[i]));
            if (partial) (*partial)[i] = st.variation;
        }
        return st;
    };

    std::size_t N = opt.initial_points;
    SegmentStats cur = run(N, nullptr);
    for (;;) {
        if (2 * N > opt.max_points)
            throw NotBVCertifiable("variation refinement did not converge on a piece");
        SegmentStats next = run(2 * N, nullptr);
        N *= 2;
        const bool done = std::abs(next.variation - cur.variation) <= opt.rel_tol * std::max(next.variation, 1e-300);
        cur = next;
        if (done) break;
    }

    if (side != Side::finite) {
        // growth over the last two decades of the ladder
        std::vector<double> partial;
        run(N, &partial);
        auto index_at = [&](double frac_of_span) {
            const double u = std::log1p(frac_of_span * span);
            return std::min(N, static_cast<std::size_t>(std::llround(u / umax * static_cast<double>(N))));
        };
        const double v_total = partial[N];
        const double v_10 = partial[index_at(0.1)];
        const double v_100 = partial[index_at(0.01)];
        const double last = v_total - v_10;
        const double before = v_10 - v_100;
        if (last > 1e-6 * std::max(1.0, v_total) && last > 0.5 * before)
            throw NotBVCertifiable("variation still growing at the tail horizon " + format_number(opt.lambda_max));
    }
    return cur;
}

SegmentStats analyze(const BVFunction& g, double c, double d, const VariationOptions& opt) {
    if (!(c < d)) throw std::invalid_argument("total variation requires c < d");
    SegmentStats total;
    const auto bps = g.breakpoints();
    const std::size_t pieces = g.piece_count();
    for (std::size_t k = 0; k < pieces; ++k) {
        const double left = k == 0 ? -kInf : bps[k - 1];
        const double right = k + 1 == pieces ? kInf : bps[k];
        const double lo = std::max(c, left);
        const double hi = std::min(d, right);
        if (!(lo < hi)) continue;
        if (std::isinf(lo) && std::isinf(hi)) {
            const SegmentStats a = analyze_segment(g, k, -kInf, 0.0, opt);
            const SegmentStats b = analyze_segment(g, k, 0.0, kInf, opt);
            total.variation += a.variation + b.variation;
            total.sup = std::max({total.sup, a.sup, b.sup});
        } else {
            const SegmentStats s = analyze_segment(g, k, lo, hi, opt);
            total.variation += s.variation;
            total.sup = std::max(total.sup, s.sup);
        }
    }
    // jumps g(b+0) - g(b) at breakpoints in [c, d)
    for (std::size_t k = 0; k < bps.size(); ++k) {
        const double b = bps[k];
        if (b < c || b >= d) continue;
        const double at = g.piece_value(k, b);
        const double after = g.piece_value(k + 1, b);
        total.variation += std::abs(after - at);
        total.sup = std::max({total.sup, std::abs(at), std::abs(after)});
    }
    return total;
}

}  // namespace

double total_variation(const BVFunction& g, double c, double d, const VariationOptions& opt) {
    if (c == d && std::isfinite(c)) return 0.0;
    return analyze(g, c, d, opt).variation;
}

double sup_norm(const BVFunction& g, const VariationOptions& opt) { return analyze(g, -kInf, kInf, opt).sup; }

double v_norm(const BVFunction& g, const VariationOptions& opt) {
    const SegmentStats s = analyze(g, -kInf, kInf, opt);
    return s.sup + s.variation;
}

// ---------------------------------------------------------------------------
// Symbol DSL

namespace {

constexpr Expression::Context kXContext{.allow_x = true, .allow_lambda = false, .primary = Variable::x};
constexpr Expression::Context kLambdaContext{.allow_x = true, .allow_lambda = true, .primary = Variable::lambda};

double parse_bound(Lexer& lex) {
    double sign = 1.0;
    if (lex.at_punct('-')) {
        lex.next();
        sign = -1.0;
    } else if (lex.at_punct('+')) {
        lex.next();
    }
    const Token& t = lex.peek();
    if (t.kind == Token::Kind::number) return sign * lex.next().number;
    if (t.kind == Token::Kind::identifier && t.text == "inf") {
        lex.next();
        return sign * kInf;
    }
    lex.fail("expected a number, 'inf', or '-inf' as interval bound");
}

std::string format_bound(double b) {
    if (std::isinf(b)) return b < 0 ? "-inf" : "inf";
    return format_number(b);
}

}  // namespace

Symbol Symbol::parse(std::string_view text) {
    Lexer lex(text);
    Symbol s;
    if (lex.at_identifier("x")) {
        lex.next();
        lex.expect_punct(':', "':' after 'x'");
        s.x_factor_ = Expression::parse(lex, kXContext);
        lex.expect_punct(';', "';' after the x factor");
    }
    if (!lex.at_identifier("lambda")) lex.fail("expected 'lambda'");
    lex.next();

    if (lex.at_punct(':')) {
        lex.next();
        s.pieces_.push_back(Expression::parse(lex, kLambdaContext));
        if (lex.at_punct(';')) lex.next();
    } else {
        double expected_left = -kInf;
        bool closed = false;
        while (lex.at_identifier("on")) {
            lex.next();
            const Token open = lex.peek();
            lex.expect_punct('(', "'(' opening the interval");
            const double left = parse_bound(lex);
            lex.expect_punct(',', "',' between interval bounds");
            const double right = parse_bound(lex);
            const Token close = lex.peek();
            if (!lex.at_punct(']') && !lex.at_punct(')')) lex.fail("expected ']' or ')' closing the interval");
            lex.next();
            lex.expect_punct(':', "':' after the interval");

            if (!(left < right))
                throw SemanticError("interval (" + format_bound(left) + ", " + format_bound(right) +
                                        "): breakpoints must be strictly increasing",
                                    open.line, open.column);
            if (closed) throw SemanticError("pieces continue after the +inf piece", open.line, open.column);
            if (left != expected_left)
                throw SemanticError("piece must start at " + format_bound(expected_left) +
                                        " to continue the partition, got " + format_bound(left),
                                    open.line, open.column);
            if (std::isinf(left) && left > 0)
                throw SemanticError("interval cannot start at +inf", open.line, open.column);
            if (std::isfinite(right) && close.text != "]")
                throw SemanticError("finite right bounds must be closed with ']' (pieces are left-continuous)",
                                    close.line, close.column);

            s.pieces_.push_back(Expression::parse(lex, kLambdaContext));
            if (std::isfinite(right)) {
                s.breakpoints_.push_back(right);
                expected_left = right;
            } else {
                closed = true;
            }
            if (lex.at_punct(';')) lex.next();
        }
        if (s.pieces_.empty()) lex.fail("expected ':' or 'on' after 'lambda'");
        if (!closed) {
            const Token& t = lex.peek();
            throw SemanticError("pieces must extend to +inf", t.line, t.column);
        }
    }
    if (lex.peek().kind != Token::Kind::end) lex.fail("unexpected '" + lex.peek().text + "' after the symbol");
    return s;
}

Symbol Symbol::constant(double value) {
    Symbol s;
    s.pieces_.push_back(Expression::constant(value));
    return s;
}

double Symbol::x_factor(double x) const { return x_factor_ ? (*x_factor_)(x) : 1.0; }

bool Symbol::pieces_depend_on_x() const noexcept {
    return std::any_of(pieces_.begin(), pieces_.end(), [](const Expression& e) { return e.uses(Variable::x); });
}

BVFunction Symbol::section(double x) const { return BVFunction(breakpoints_, pieces_, x, x_factor(x)); }

BVFunction Symbol::lambda_part(double x) const { return BVFunction(breakpoints_, pieces_, x, 1.0); }

double Symbol::operator()(double x, double lambda) const {
    const auto k = static_cast<std::size_t>(std::lower_bound(breakpoints_.begin(), breakpoints_.end(), lambda) -
                                            breakpoints_.begin());
    return x_factor(x) * pieces_[k](x, lambda);
}

std::string Symbol::to_string() const {
    std::ostringstream out;
    if (x_factor_) out << "x: " << x_factor_->to_string() << "; ";
    out << "lambda";
    if (pieces_.size() == 1 && breakpoints_.empty()) {
        out << ": " << pieces_[0].to_string();
        return out.str();
    }
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const double left = k == 0 ? -kInf : breakpoints_[k - 1];
        const double right = k == breakpoints_.size() ? kInf : breakpoints_[k];
        if (k > 0) out << ";";
        out << " on (" << format_bound(left) << ", " << format_bound(right) << (std::isinf(right) ? ")" : "]")
            << ": " << pieces_[k].to_string();
    }
    return out.str();
}

std::vector<double> section_v_norms(const Symbol& a, std::span<const double> x_probes, const VariationOptions& opt) {
    std::vector<double> out(x_probes.size());
    if (!a.pieces_depend_on_x()) {
        // sections are c(x) * g(lambda): norms scale by |c(x)|
        const double base = v_norm(a.lambda_part(0.0), opt);
        for (std::size_t i = 0; i < x_probes.size(); ++i) out[i] = std::abs(a.x_factor(x_probes[i])) * base;
        return out;
    }
    for (std::size_t i = 0; i < x_probes.size(); ++i) out[i] = v_norm(a.section(x_probes[i]), opt);
    return out;
}

double linf_v_norm(const Symbol& a, std::span<const double> x_probes, const VariationOptions& opt) {
    if (x_probes.empty()) throw std::invalid_argument("linf_v_norm needs at least one probe");
    const auto norms = section_v_norms(a, x_probes, opt);
    return *std::max_element(norms.begin(), norms.end());
}

namespace {

void require_increasing(std::span<const double> v, const char* what) {
    if (v.empty()) throw std::invalid_argument(std::string(what) + " must be non-empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw std::invalid_argument(std::string(what) + " must be increasing");
}

// Evaluates a per-section statistic, reusing one unscaled evaluation when the
// lambda pieces do not depend on x.
class SectionCache {
public:
    explicit SectionCache(const Symbol& a) : a_(a), independent_(!a.pieces_depend_on_x()) {}

    template <class F>
    double eval(double x, F&& stat, std::optional<double>& slot) const {
        if (!independent_) return stat(a_.section(x));
        if (!slot) slot = stat(a_.lambda_part(0.0));
        return std::abs(a_.x_factor(x)) * *slot;
    }

private:
    const Symbol& a_;
    bool independent_;
};

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
    return s;
}

}  // namespace

CompactnessReport compactness_report(const Symbol& a, std::span<const double> n_list, std::span<const double> l_ladder,
                                     const CompactnessOptions& opt) {
    require_increasing(n_list, "N list");
    require_increasing(l_ladder, "L ladder");
    require_increasing(opt.x_ladder, "x ladder");
    if (opt.probes_per_n < 2) throw std::invalid_argument("compactness probes need at least two points per N");

    const SectionCache cache(a);
    const double lmax = opt.variation.lambda_max;
    CompactnessReport rep;

    // probe set for (a): the x ladder mirrored plus the widest N window
    std::vector<double> probes;
    for (double x : opt.x_ladder) {
        probes.push_back(x);
        probes.push_back(-x);
    }
    const double widest = n_list.back();
    for (std::size_t i = 0; i < opt.probes_per_n; ++i)
        probes.push_back(-widest + 2.0 * widest * static_cast<double>(i) / static_cast<double>(opt.probes_per_n - 1));

    {
        auto& c = rep.vanishing_at_infinity;
        double worst = 0.0;
        for (double x : probes) {
            const double v = std::max(std::abs(a(x, lmax)), std::abs(a(x, -lmax)));
            c.values.push_back(v);
            worst = std::max(worst, v);
        }
        c.pass = worst <= opt.threshold;
        c.evidence = "max |a(x, +-" + format_number(lmax) + ")| over " + std::to_string(probes.size()) +
                     " probes = " + format_number(worst);
    }

    {
        auto& c = rep.variation_decay_in_x;
        std::optional<double> slot;
        auto variation = [&](const BVFunction& g) { return total_variation(g, -kInf, kInf, opt.variation); };
        bool monotone = true;
        for (double x : opt.x_ladder) {
            const double v = std::max(cache.eval(x, variation, slot), cache.eval(-x, variation, slot));
            if (!c.values.empty() && v > c.values.back() * (1.0 + 1e-9) + 1e-12) monotone = false;
            c.values.push_back(v);
        }
        c.pass = monotone && c.values.back() <= opt.threshold;
        c.evidence = "V(a(x, .)) along |x| = [" + join(opt.x_ladder) + "]: [" + join(c.values) + "]" +
                     (monotone ? "" : ", not monotone");
    }

    {
        auto& c = rep.uniform_tail_variation;
        std::vector<std::optional<double>> slots(l_ladder.size());
        c.pass = true;
        std::string evidence;
        for (double N : n_list) {
            std::vector<double> row(l_ladder.size(), 0.0);
            for (std::size_t i = 0; i < opt.probes_per_n; ++i) {
                const double x = -N + 2.0 * N * static_cast<double>(i) / static_cast<double>(opt.probes_per_n - 1);
                for (std::size_t m = 0; m < l_ladder.size(); ++m) {
                    const double L = l_ladder[m];
                    auto tail = [&](const BVFunction& g) {
                        return total_variation(g, -kInf, -L, opt.variation) +
                               total_variation(g, L, kInf, opt.variation);
                    };
                    row[m] = std::max(row[m], cache.eval(x, tail, slots[m]));
                }
            }
            const bool ok = row.back() <= opt.threshold;
            c.pass = c.pass && ok;
            c.values.push_back(row.back());
            evidence += (evidence.empty() ? "" : "; ") + std::string("N = ") + format_number(N) + ": [" + join(row) +
                        "]";
            c.table.push_back(std::move(row));
        }
        c.evidence = "sup tail variation over L = [" + join({l_ladder.begin(), l_ladder.end()}) + "]: " + evidence;
    }
    return rep;
}

}  // namespace modlab
