#include "modlab/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modlab {

VariableExponent VariableExponent::constant(double p) {
    if (!std::isfinite(p) || p < 1.0) throw std::invalid_argument("constant exponent must be finite and >= 1");
    VariableExponent e;
    e.kind_ = Kind::constant;
    e.p_ = p;
    return e;
}

VariableExponent VariableExponent::closed_form(std::string_view expr) {
    VariableExponent e;
    e.kind_ = Kind::closed_form;
    e.expr_ = Expression::parse(expr, {.allow_x = true, .allow_lambda = false, .primary = Variable::x});
    e.expr_text_ = std::string(expr);
    return e;
}

VariableExponent VariableExponent::lerner(double p0, double mu) {
    if (!(p0 - std::abs(mu) > 1.0))
        throw std::invalid_argument("Lerner exponent requires p0 - |mu| > 1");
    VariableExponent e;
    e.kind_ = Kind::lerner;
    e.p0_ = p0;
    e.mu_ = mu;
    return e;
}

VariableExponent VariableExponent::sampled(Grid grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw std::invalid_argument("sampled exponent size does not match grid");
    for (double v : values) {
        if (!std::isfinite(v) || v < 1.0) throw std::invalid_argument("sampled exponent values must be finite and >= 1");
    }
    VariableExponent e;
    e.kind_ = Kind::sampled;
    e.grid_ = grid;
    e.values_ = std::move(values);
    return e;
}

VariableExponent VariableExponent::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(j.at("p").get<double>());
    if (kind == "expr") return closed_form(j.at("expr").get<std::string>());
    if (kind == "lerner") return lerner(j.at("p0").get<double>(), j.at("mu").get<double>());
    if (kind == "sampled") {
        auto values = j.at("values").get<std::vector<double>>();
        Grid g(j.at("x_min").get<double>(), j.at("x_max").get<double>(), values.size());
        return sampled(g, std::move(values));
    }
    throw std::invalid_argument("unknown exponent kind '" + kind + "'");
}

nlohmann::json VariableExponent::to_json() const {
    switch (kind_) {
        case Kind::constant: return {{"kind", "constant"}, {"p", p_}};
        case Kind::closed_form: return {{"kind", "expr"}, {"expr", expr_text_}};
        case Kind::lerner: return {{"kind", "lerner"}, {"p0", p0_}, {"mu", mu_}};
        case Kind::sampled:
            return {{"kind", "sampled"}, {"x_min", grid_->x_min()}, {"x_max", grid_->x_max()}, {"values", values_}};
        case Kind::conjugate: return {{"kind", "conjugate"}, {"of", base_->to_json()}};
    }
    return {};
}

std::string VariableExponent::describe() const { return to_json().dump(); }

bool VariableExponent::limit_free_by_construction() const noexcept {
    if (kind_ == Kind::lerner) return mu_ != 0.0;
    if (kind_ == Kind::conjugate) return base_->limit_free_by_construction();
    return false;
}

std::optional<double> VariableExponent::constant_value() const noexcept {
    if (kind_ == Kind::constant) return p_;
    return std::nullopt;
}

double VariableExponent::operator()(double x) const {
    switch (kind_) {
        case Kind::constant:
            return p_;
        case Kind::closed_form: {
            const double v = expr_(x);
            if (v < 1.0) throw EvalError("exponent " + expr_text_ + " is below 1 at x = " + format_number(x));
            return v;
        }
        case Kind::lerner: {
            if (x == 0.0) return p0_;
            const double ax = std::abs(x);
            return p0_ + mu_ * std::sin(std::log(std::log1p(std::max(ax, 1.0 / ax))));
        }
        case Kind::sampled: {
            const Grid& g = *grid_;
            const double t = (x - g.x_min()) / g.spacing();
            if (t <= 0.0) return values_.front();
            const double last = static_cast<double>(values_.size() - 1);
            if (t >= last) return values_.back();
            const auto j = static_cast<std::size_t>(std::floor(t));
            const double frac = t - static_cast<double>(j);
            if (frac < 1e-9) return values_[j];
            if (frac > 1.0 - 1e-9) return values_[j + 1];
            return (1.0 - frac) * values_[j] + frac * values_[j + 1];
        }
        case Kind::conjugate: {
            const double q = (*base_)(x);
            if (!(q > 1.0)) throw EvalError("conjugate exponent undefined where p <= 1 (x = " + format_number(x) + ")");
            return q / (q - 1.0);
        }
    }
    return p_;
}

std::vector<double> VariableExponent::evaluate(const Grid& g) const {
    std::vector<double> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) out[j] = (*this)(g.node(j));
    return out;
}

VariableExponent conjugate_exponent(const VariableExponent& p) {
    using Kind = VariableExponent::Kind;
    switch (p.kind_) {
        case Kind::constant:
            if (!(p.p_ > 1.0)) throw std::invalid_argument("conjugate exponent requires p > 1");
            return VariableExponent::constant(p.p_ / (p.p_ - 1.0));
        case Kind::sampled: {
            std::vector<double> q(p.values_.size());
            for (std::size_t j = 0; j < q.size(); ++j) {
                if (!(p.values_[j] > 1.0)) throw std::invalid_argument("conjugate exponent requires p > 1 at every node");
                q[j] = p.values_[j] / (p.values_[j] - 1.0);
            }
            return VariableExponent::sampled(*p.grid_, std::move(q));
        }
        case Kind::conjugate:
            return *p.base_;
        default: {
            VariableExponent e;
            e.kind_ = Kind::conjugate;
            e.base_ = std::make_shared<const VariableExponent>(p);
            return e;
        }
    }
}

VariableExponent conjugate_exponent(const VariableExponent& p, const Grid& g) {
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!(p(g.node(j)) > 1.0))
            throw std::invalid_argument("conjugate exponent requires p > 1; fails at x = " + format_number(g.node(j)));
    }
    return conjugate_exponent(p);
}

ExponentBounds exponent_bounds(const VariableExponent& p, const Grid& g) {
    const auto values = p.evaluate(g);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi, *lo <= 1.0 + 1e-9 || *hi >= 1e6};
}

namespace {

double median(std::vector<double> v) {
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    double upper = v[m];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    return 0.5 * (lower + upper);
}

double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace

LogHolderDiagnostics log_holder_diagnostics(const VariableExponent& p, const Grid& g) {
    if (g.x_min() > -10.0 || g.node(g.size() - 1) < 10.0 - g.spacing())
        throw std::invalid_argument("log-Holder diagnostics need a grid spanning at least [-10, 10]");
    const std::size_t n = g.size();
    const auto values = p.evaluate(g);
    const double h = g.spacing();

    double c0 = 0.0;
    const auto reach = static_cast<std::size_t>(std::ceil(0.5 / h));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 1; d <= reach && i + d < n; ++d) {
            const double dist = static_cast<double>(d) * h;
            if (dist >= 0.5) break;
            c0 = std::max(c0, std::abs(values[i] - values[i + d]) * -std::log(dist));
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(g.node(a)) < std::abs(g.node(b)); });
    const std::size_t decile = std::max<std::size_t>(1, n / 10);
    std::vector<double> inner, outer;
    for (std::size_t i = 0; i < decile; ++i) {
        inner.push_back(values[order[i]]);
        outer.push_back(values[order[n - 1 - i]]);
    }
    const double p_inf = median(outer);

    double c_inf = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        c_inf = std::max(c_inf, std::abs(values[j] - p_inf) * std::log(std::numbers::e + std::abs(g.node(j))));

    const bool no_limit = p.limit_free_by_construction() || spread(outer) > 10.0 * spread(inner);
    return {c0, c_inf, no_limit ? std::nullopt : std::optional<double>(p_inf)};
}

DecompositionCheck verify_interpolation_decomposition(const VariableExponent& p, double p0, double theta,
                                                      const VariableExponent& p1, const Grid& g) {
    if (!(p0 > 1.0) || !std::isfinite(p0)) throw std::invalid_argument("p0 must lie in (1, inf)");
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j);
        worst = std::max(worst, std::abs(1.0 / p(x) - theta / p0 - (1.0 - theta) / p1(x)));
    }
    return {worst, theta > 0.0 && theta < 1.0};
}

}  // namespace modlab
