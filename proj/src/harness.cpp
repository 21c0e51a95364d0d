#include "modlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "modlab/bvsymbol.hpp"
#include "modlab/lpspace.hpp"
#include "modlab/maximal.hpp"
#include "modlab/parallel.hpp"
#include "modlab/singular.hpp"

namespace modlab {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::pair<double, double> read_range(const json& j, const char* key, std::pair<double, double> def) {
    if (!j.contains(key)) return def;
    const auto& r = j.at(key);
    if (!r.is_array() || r.size() != 2) throw ConfigError(std::string("family.") + key + " must be [min, max]");
    const double lo = r[0].get<double>(), hi = r[1].get<double>();
    if (!(lo <= hi)) throw ConfigError(std::string("family.") + key + " must satisfy min <= max");
    return {lo, hi};
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double uniform(std::mt19937_64& eng, double lo, double hi) {
    // 53 random bits, so draws do not depend on the standard library's distributions
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        reject_unknown(j, {"suite", "grid", "exponent", "family", "operator", "tolerances", "output", "record_wall_time"},
                       "config");
        ExperimentConfig c;
        c.suite = j.value("suite", c.suite);
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            reject_unknown(g, {"x_min", "x_max", "n"}, "grid");
            c.grid.x_min = g.value("x_min", c.grid.x_min);
            c.grid.x_max = g.value("x_max", c.grid.x_max);
            c.grid.n = g.value("n", c.grid.n);
            (void)c.grid.make();
        }
        if (j.contains("exponent")) c.exponent = VariableExponent::from_json(j.at("exponent"));
        if (j.contains("family")) {
            const auto& f = j.at("family");
            reject_unknown(f, {"kinds", "trials", "seed", "center", "width", "beta", "amplitude", "chi_left", "chi_length"},
                           "family");
            auto& s = c.family;
            if (f.contains("kinds")) s.kinds = f.at("kinds").get<std::vector<std::string>>();
            if (s.kinds.empty()) throw ConfigError("family.kinds must not be empty");
            for (const auto& k : s.kinds)
                if (k != "bump" && k != "chi" && k != "constant" && k != "zero")
                    throw ConfigError("unknown family kind '" + k + "'");
            s.trials = f.value("trials", s.trials);
            if (f.contains("seed")) {
                const auto& sd = f.at("seed");
                if (!sd.is_number_unsigned()) throw ConfigError("family.seed must be an unsigned 64-bit integer");
                s.seed = sd.get<std::uint64_t>();
            }
            std::tie(s.center_min, s.center_max) = read_range(f, "center", {s.center_min, s.center_max});
            std::tie(s.width_min, s.width_max) = read_range(f, "width", {s.width_min, s.width_max});
            std::tie(s.beta_min, s.beta_max) = read_range(f, "beta", {s.beta_min, s.beta_max});
            std::tie(s.amplitude_min, s.amplitude_max) = read_range(f, "amplitude", {s.amplitude_min, s.amplitude_max});
            std::tie(s.chi_left_min, s.chi_left_max) = read_range(f, "chi_left", {s.chi_left_min, s.chi_left_max});
            std::tie(s.chi_length_min, s.chi_length_max) =
                read_range(f, "chi_length", {s.chi_length_min, s.chi_length_max});
            if (!(s.width_min > 0.0)) throw ConfigError("family.width must be positive");
            if (!(s.chi_length_min > 0.0)) throw ConfigError("family.chi_length must be positive");
        }
        if (j.contains("operator")) {
            c.operator_spec = j.at("operator");
            if (!c.operator_spec.is_object()) throw ConfigError("operator must be a JSON object");
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            reject_unknown(t, {"relative", "stability"}, "tolerances");
            c.tolerances.relative = t.value("relative", c.tolerances.relative);
            c.tolerances.stability = t.value("stability", c.tolerances.stability);
        }
        c.output = j.value("output", c.output);
        c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ojson ExperimentConfig::to_json() const {
    const auto& f = family;
    ojson j;
    j["suite"] = suite;
    j["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n", grid.n}};
    j["exponent"] = exponent.to_json();
    j["family"] = {{"kinds", f.kinds},
                   {"trials", f.trials},
                   {"seed", f.seed},
                   {"center", {f.center_min, f.center_max}},
                   {"width", {f.width_min, f.width_max}},
                   {"beta", {f.beta_min, f.beta_max}},
                   {"amplitude", {f.amplitude_min, f.amplitude_max}},
                   {"chi_left", {f.chi_left_min, f.chi_left_max}},
                   {"chi_length", {f.chi_length_min, f.chi_length_max}}};
    j["operator"] = ojson::parse(operator_spec.dump());
    j["tolerances"] = {{"relative", tolerances.relative}, {"stability", tolerances.stability}};
    j["output"] = output;
    j["record_wall_time"] = record_wall_time;
    return j;
}

// ---------------------------------------------------------------------------
// Test functions

SampledFunction TrialFunction::sample(const Grid& g) const {
    std::vector<Complex> v(g.size(), Complex{});
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j);
        if (kind == "bump") {
            const double u = (x - center) / width;
            v[j] = amplitude * std::exp(-u * u) * std::polar(1.0, beta * x);
        } else if (kind == "chi") {
            v[j] = (x >= left && x <= left + length) ? amplitude : 0.0;
        } else if (kind == "constant") {
            v[j] = amplitude;
        }
    }
    return SampledFunction(g, std::move(v));
}

ojson TrialFunction::to_json() const {
    ojson j;
    j["kind"] = kind;
    j["amplitude"] = amplitude;
    if (kind == "bump") {
        j["center"] = center;
        j["width"] = width;
        j["beta"] = beta;
    } else if (kind == "chi") {
        j["left"] = left;
        j["length"] = length;
    }
    return j;
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

std::vector<TrialFunction> draw_family(const FamilySpec& spec) {
    std::vector<TrialFunction> out(spec.trials);
    for (std::size_t t = 0; t < spec.trials; ++t) {
        auto eng = trial_engine(spec.seed, t);
        TrialFunction& f = out[t];
        f.kind = spec.kinds[t % spec.kinds.size()];
        f.amplitude = uniform(eng, spec.amplitude_min, spec.amplitude_max);
        f.center = uniform(eng, spec.center_min, spec.center_max);
        f.width = uniform(eng, spec.width_min, spec.width_max);
        f.beta = uniform(eng, spec.beta_min, spec.beta_max);
        f.left = uniform(eng, spec.chi_left_min, spec.chi_left_max);
        f.length = uniform(eng, spec.chi_length_min, spec.chi_length_max);
        if (f.kind == "zero") f.amplitude = 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report

namespace {

VerificationCase make_case(std::string name, double lhs, double rhs, double tolerance) {
    VerificationCase c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = lhs - rhs;
    c.tolerance = tolerance;
    c.pass = c.margin <= tolerance;
    return c;
}

// Worst node of lhs <= rhs.
VerificationCase nodewise(std::string name, const std::vector<double>& lhs, const std::vector<double>& rhs,
                          double tolerance) {
    std::size_t worst = 0;
    for (std::size_t j = 1; j < lhs.size(); ++j)
        if (lhs[j] - rhs[j] > lhs[worst] - rhs[worst]) worst = j;
    return make_case(std::move(name), lhs[worst], rhs[worst], tolerance);
}

std::vector<double> real_parts(const SampledFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) v[j] = f[j].real();
    return v;
}

std::vector<double> scaled(std::vector<double> v, double s) {
    for (double& x : v) x *= s;
    return v;
}

std::string trial_name(std::size_t t, const std::string& what) { return "trial[" + std::to_string(t) + "]." + what; }

}  // namespace

void VerificationReport::add(std::string name, double lhs, double rhs, double tolerance) {
    cases.push_back(make_case(std::move(name), lhs, rhs, tolerance));
}

std::size_t VerificationReport::n_pass() const noexcept {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return c.pass; }));
}

std::size_t VerificationReport::n_fail() const noexcept { return cases.size() - n_pass(); }

ojson VerificationReport::to_json() const {
    ojson j;
    j["suite"] = suite;
    j["config"] = config;
    j["cases"] = ojson::array();
    double max_margin = -std::numeric_limits<double>::infinity();
    for (const auto& c : cases) {
        j["cases"].push_back({{"name", c.name},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"margin", c.margin},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
        max_margin = std::max(max_margin, c.margin);
    }
    j["skipped"] = ojson::array();
    for (const auto& s : skipped) j["skipped"].push_back({{"name", s.name}, {"reason", s.reason}});
    j["summary"] = {{"n_pass", n_pass()}, {"n_fail", n_fail()}};
    if (cases.empty())
        j["summary"]["max_margin"] = nullptr;
    else
        j["summary"]["max_margin"] = max_margin;
    j["diagnostics"] = diagnostics;
    if (wall_time)
        j["wall_time"] = *wall_time;
    else
        j["wall_time"] = nullptr;
    return j;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

struct TrialOutcome {
    std::vector<VerificationCase> cases;
    std::vector<SkippedCase> skipped;
    ojson diagnostics = ojson::object();
};

VerificationReport start_report(const ExperimentConfig& cfg, const std::string& suite) {
    VerificationReport r;
    r.suite = suite;
    r.config = cfg.to_json();
    return r;
}

void merge(VerificationReport& r, std::vector<TrialOutcome>& outcomes) {
    for (auto& o : outcomes) {
        for (auto& c : o.cases) r.cases.push_back(std::move(c));
        for (auto& s : o.skipped) r.skipped.push_back(std::move(s));
    }
}

ModulationFamily modulation_family(const json& spec, const Grid& g) {
    const json alphas = spec.value("alphas", json{{"band", 10.0}});
    if (alphas.contains("list")) return ModulationFamily(alphas.at("list").get<std::vector<double>>(), g);
    return ModulationFamily::frequency_band(g, alphas.value("band", 10.0));
}

const std::vector<std::string> kDefaultSymbols{
    "lambda: 1",
    "x: exp(-x^2); lambda on (-inf, 0]: exp(l); on (0, inf): exp(-l)",
    "lambda on (-inf, -2]: 0; on (-2, 3]: 1; on (3, inf): 0",
    "x: 1 + chi(-1, 2); lambda on (-inf, 0]: -1; on (0, inf): 1",
    "lambda: 1 / (1 + (l - x)^2)",
};

std::vector<Symbol> parse_symbols(const json& spec) {
    std::vector<Symbol> out;
    const auto texts = spec.value("symbols", kDefaultSymbols);
    for (const auto& t : texts) out.push_back(Symbol::parse(t));
    return out;
}

// Largest |f_hat| among frequencies that a shift by up to max|alpha| can
// carry across the Nyquist edge, relative to max |f_hat|.
double wrap_exposure(const SampledFunction& f, const ModulationFamily& fam) {
    const auto F = forward_fourier(f);
    const Grid& g = f.grid();
    double reach = 0.0;
    for (double a : fam.alphas()) reach = std::max(reach, std::abs(a));
    const double edge = g.nyquist() - reach - g.frequency_spacing();
    double top = 0.0, exposed = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double v = std::abs(F[k]);
        top = std::max(top, v);
        if (std::abs(g.frequency(k)) >= edge) exposed = std::max(exposed, v);
    }
    return top > 0.0 ? exposed / top : 0.0;
}

}  // namespace

VerificationReport inequality_suite(const ExperimentConfig& cfg) {
    VerificationReport report = start_report(cfg, "inequalities");
    const Grid g = cfg.grid.make();
    const auto& spec = cfg.operator_spec;
    const ModulationFamily fam = modulation_family(spec, g);
    const double r = spec.value("r", 2.0);
    const std::size_t pairs = spec.value("pairs", std::size_t{20});
    const IntervalFamily intervals = default_sharp_family(g.size());
    const auto symbols = parse_symbols(spec);
    const auto trials = draw_family(cfg.family);
    const double rel = cfg.tolerances.relative;

    // section norms depend on the symbol and grid only
    std::vector<std::vector<double>> norms(symbols.size());
    const auto nodes = g.nodes();
    parallel_for(symbols.size(), [&](std::size_t s) { norms[s] = section_v_norms(symbols[s], nodes); });

    std::vector<TrialOutcome> outcomes(trials.size());
    parallel_for(trials.size(), [&](std::size_t t) {
        TrialOutcome& out = outcomes[t];
        const SampledFunction f = trials[t].sample(g);
        const double scale = f.max_abs();
        const double tol = rel * scale;

        std::string refusal;
        if (!fam.grid_aligned())
            refusal = "modulation family is not grid-aligned";
        else if (fam.size() < 2)
            refusal = "modulation family has fewer than two frequencies";
        else if (const double w = wrap_exposure(f, fam); w > 1e-12)
            refusal = "spectrum reaches the cyclic wrap band (relative level " + format_number(w) + ")";

        if (refusal.empty()) {
            out.cases.push_back(nodewise(trial_name(t, "s_star_le_carleson"), real_parts(s_star(f, fam)),
                                         real_parts(carleson(f, fam, HilbertBase::multiplier)), tol));
            auto eng = trial_engine(cfg.family.seed, (std::uint64_t{1} << 32) + t);
            double worst = 0.0;
            for (std::size_t p = 0; p < pairs; ++p) {
                std::size_t i = static_cast<std::size_t>(eng() % fam.size());
                std::size_t k = static_cast<std::size_t>(eng() % (fam.size() - 1));
                if (k >= i) ++k;
                if (i > k) std::swap(i, k);
                const double a = fam.alphas()[i], b = fam.alphas()[k];
                const auto d = partial_fourier_integral(f, a, b) - partial_fourier_integral_via_hilbert(f, a, b);
                worst = std::max(worst, d.max_abs());
            }
            out.cases.push_back(make_case(trial_name(t, "band_restriction_two_paths"), worst, 0.0, tol));
        } else {
            out.skipped.push_back({trial_name(t, "s_star_le_carleson"), refusal});
            out.skipped.push_back({trial_name(t, "band_restriction_two_paths"), refusal});
        }

        out.cases.push_back(nodewise(trial_name(t, "carleson_le_maximal_carleson"),
                                     real_parts(carleson(f, fam, HilbertBase::quadrature)),
                                     real_parts(maximal_carleson(f, fam)), tol));

        const auto M = real_parts(hardy_littlewood(f, intervals));
        out.cases.push_back(
            nodewise(trial_name(t, "sharp_le_2m"), real_parts(sharp_maximal(f, intervals)), scaled(M, 2.0), tol));
        out.cases.push_back(nodewise(trial_name(t, "m_le_mr"), M, real_parts(r_maximal(f, r, intervals)), tol));

        const SampledFunction S = s_star(f);
        double factor1 = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < symbols.size(); ++s) {
            const auto chk = pointwise_bound_check(apply_pdo(symbols[s], f), S, norms[s], scale);
            const double bound_scale = chk.scale;
            out.cases.push_back(make_case(trial_name(t, "pdo_pointwise_bound[" + std::to_string(s) + "]"),
                                          chk.max_violation, 0.0, rel * bound_scale));
            if (bound_scale > 0.0) factor1 = std::max(factor1, chk.max_violation_factor1 / bound_scale);
        }
        out.diagnostics["factor1_margin"] = std::isfinite(factor1) ? factor1 : 0.0;
    });

    merge(report, outcomes);
    double factor1 = -std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) factor1 = std::max(factor1, o.diagnostics["factor1_margin"].get<double>());
    ojson syms = ojson::array();
    for (const auto& s : symbols) syms.push_back(s.to_string());
    report.diagnostics["symbols"] = syms;
    report.diagnostics["modulation_family_size"] = fam.size();
    report.diagnostics["modulation_family_grid_aligned"] = fam.grid_aligned();
    report.diagnostics["pdo_bound_constant_one_max_relative_residual"] = trials.empty() ? 0.0 : factor1;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

using OperatorFn = std::function<SampledFunction(const SampledFunction&)>;

OperatorFn named_operator(const std::string& name, const json& spec, const Grid& g) {
    if (name == "identity") return [](const SampledFunction& f) { return f; };
    if (name == "double") return [](const SampledFunction& f) { return Complex{2.0, 0.0} * f; };
    if (name == "C") {
        auto fam = std::make_shared<ModulationFamily>(modulation_family(spec, g));
        return [fam](const SampledFunction& f) { return carleson(f, *fam, HilbertBase::multiplier); };
    }
    if (name == "S*") {
        auto fam = std::make_shared<ModulationFamily>(modulation_family(spec, g));
        return [fam](const SampledFunction& f) { return s_star(f, *fam); };
    }
    if (name == "pdo") {
        auto sym = std::make_shared<Symbol>(Symbol::parse(spec.value("symbol", kDefaultSymbols[1])));
        return [sym](const SampledFunction& f) { return apply_pdo(*sym, f); };
    }
    throw ConfigError("unknown operator '" + name + "' (expected identity, double, C, S*, pdo)");
}

TrialFunction perturb(const TrialFunction& base, const FamilySpec& s, std::mt19937_64& eng) {
    TrialFunction f = base;
    auto step = [&](double scale) { return scale * (2.0 * uniform(eng, 0.0, 1.0) - 1.0); };
    f.center = std::clamp(f.center + step(0.25), s.center_min, s.center_max);
    f.width = std::clamp(f.width * std::exp(step(0.2)), s.width_min, s.width_max);
    f.beta = std::clamp(f.beta + step(0.5), s.beta_min, s.beta_max);
    f.left = std::clamp(f.left + step(0.25), s.chi_left_min, s.chi_left_max);
    f.length = std::clamp(f.length * std::exp(step(0.2)), s.chi_length_min, s.chi_length_max);
    return f;
}

}  // namespace

VerificationReport norm_ratio_scan(const ExperimentConfig& cfg) {
    VerificationReport report = start_report(cfg, "norm-ratio");
    const auto& spec = cfg.operator_spec;
    const Grid g1 = cfg.grid.make();
    const Grid g2(cfg.grid.x_min, cfg.grid.x_max, 2 * cfg.grid.n);
    if (exponent_bounds(cfg.exponent, g1).violates_bounds)
        throw ConfigError("exponent is not bounded away from 1 and infinity on the grid");
    const auto p1 = cfg.exponent.evaluate(g1);
    const auto p2 = cfg.exponent.evaluate(g2);
    const auto ops = spec.value("operators", std::vector<std::string>{"C", "S*"});
    const std::size_t rounds = spec.value("refinement_rounds", std::size_t{100});
    const auto trials = draw_family(cfg.family);

    // NaN marks a zero-norm trial
    auto ratio = [](const OperatorFn& T, const TrialFunction& tf, const Grid& g, const std::vector<double>& p) {
        const SampledFunction f = tf.sample(g);
        const double nf = luxemburg_norm(f, p).value;
        if (!(nf > 0.0)) return kNaN;
        return luxemburg_norm(T(f), p).value / nf;
    };

    for (std::size_t t = 0; t < trials.size(); ++t)
        if (trials[t].kind == "zero" || trials[t].amplitude == 0.0)
            report.skipped.push_back({trial_name(t, "ratio"), "zero-norm trial function"});

    ojson per_op = ojson::object();
    for (std::size_t o = 0; o < ops.size(); ++o) {
        const OperatorFn T1 = named_operator(ops[o], spec, g1);
        const OperatorFn T2 = named_operator(ops[o], spec, g2);

        std::vector<double> r1(trials.size());
        parallel_for(trials.size(), [&](std::size_t t) { r1[t] = ratio(T1, trials[t], g1, p1); });
        std::size_t best_index = trials.size();
        for (std::size_t t = 0; t < trials.size(); ++t)
            if (!std::isnan(r1[t]) && (best_index == trials.size() || r1[t] > r1[best_index])) best_index = t;
        if (best_index == trials.size()) throw ConfigError("every trial function has zero norm");

        TrialFunction best = trials[best_index];
        double best_ratio = r1[best_index];
        std::size_t improvements = 0;
        auto eng = trial_engine(cfg.family.seed, (std::uint64_t{2} << 32) + o);
        for (std::size_t k = 0; k < rounds; ++k) {
            const TrialFunction cand = perturb(best, cfg.family, eng);
            const double rc = ratio(T1, cand, g1, p1);
            if (rc > best_ratio) {
                best = cand;
                best_ratio = rc;
                ++improvements;
            }
        }

        // the same parameter set on the refined grid
        std::vector<TrialFunction> pool = trials;
        pool.push_back(best);
        std::vector<double> r2(pool.size());
        parallel_for(pool.size(), [&](std::size_t t) { r2[t] = ratio(T2, pool[t], g2, p2); });
        double max2 = 0.0;
        for (double v : r2)
            if (!std::isnan(v)) max2 = std::max(max2, v);

        const double factor = std::max(max2 / best_ratio, best_ratio / max2);
        report.add("stability[" + ops[o] + "]", factor, cfg.tolerances.stability, 0.0);
        per_op[ops[o]] = {{"max_ratio_lower_bound", best_ratio},
                          {"max_ratio_lower_bound_refined_grid", max2},
                          {"stability_factor", factor},
                          {"refinement_rounds", rounds},
                          {"improvements", improvements},
                          {"best_trial", best.to_json()}};
    }
    report.diagnostics["grid_sizes"] = {g1.size(), g2.size()};
    report.diagnostics["operators"] = per_op;
    return report;
}

VerificationReport fefferman_stein_ratio(const ExperimentConfig& cfg) {
    VerificationReport report = start_report(cfg, "fefferman-stein");
    const Grid g = cfg.grid.make();
    const auto p = cfg.exponent.evaluate(g);
    const auto trials = draw_family(cfg.family);
    if (std::all_of(trials.begin(), trials.end(), [](const auto& t) { return t.kind == "constant"; }))
        throw ConfigError("family consists of constants only; the sharp maximal function vanishes on all of them");
    const IntervalFamily intervals = default_sharp_family(g.size());

    std::vector<TrialOutcome> outcomes(trials.size());
    std::vector<double> ratios(trials.size(), kNaN);
    parallel_for(trials.size(), [&](std::size_t t) {
        const SampledFunction f = trials[t].sample(g);
        const double nf = luxemburg_norm(f, p).value;
        if (!(nf > 0.0)) {
            outcomes[t].skipped.push_back({trial_name(t, "ratio"), "zero function"});
            return;
        }
        const double ns = luxemburg_norm(sharp_maximal(f, intervals), p).value;
        if (!(ns > 1e-14 * nf)) {
            outcomes[t].skipped.push_back({trial_name(t, "ratio"), "sharp maximal vanishes"});
            return;
        }
        ratios[t] = nf / ns;
        const SampledFunction f2 = Complex{2.0, 0.0} * f;
        const double ratio2 =
            luxemburg_norm(f2, p).value / luxemburg_norm(sharp_maximal(f2, intervals), p).value;
        outcomes[t].cases.push_back(make_case(trial_name(t, "scaling_invariance"), std::abs(ratio2 - ratios[t]), 0.0,
                                              cfg.tolerances.relative * ratios[t]));
    });
    merge(report, outcomes);
    double lower = 0.0;
    std::size_t arg = trials.size();
    for (std::size_t t = 0; t < trials.size(); ++t)
        if (!std::isnan(ratios[t]) && ratios[t] > lower) lower = ratios[t], arg = t;
    ojson rs = ojson::array();
    for (double v : ratios) rs.push_back(std::isnan(v) ? ojson(nullptr) : ojson(v));
    report.diagnostics["ratios"] = rs;
    report.diagnostics["c_sharp_lower_bound"] = lower;
    if (arg < trials.size()) report.diagnostics["attained_by"] = trials[arg].to_json();
    return report;
}

VerificationReport self_improvement_scan(const ExperimentConfig& cfg) {
    VerificationReport report = start_report(cfg, "self-improvement");
    const Grid g = cfg.grid.make();
    const auto p = cfg.exponent.evaluate(g);
    const auto rs = cfg.operator_spec.value("r_values", std::vector<double>{1.0, 1.25, 1.5, 2.0});
    if (rs.empty() || !std::is_sorted(rs.begin(), rs.end()) || rs.front() < 1.0)
        throw ConfigError("r_values must be non-empty, sorted, and at least 1");
    const IntervalFamily intervals = IntervalFamily::all();
    const auto trials = draw_family(cfg.family);

    std::vector<TrialOutcome> outcomes(trials.size());
    std::vector<std::vector<double>> table(trials.size());
    parallel_for(trials.size(), [&](std::size_t t) {
        const SampledFunction f = trials[t].sample(g);
        const double nf = luxemburg_norm(f, p).value;
        if (!(nf > 0.0)) {
            outcomes[t].skipped.push_back({trial_name(t, "monotone_in_r"), "zero function"});
            return;
        }
        auto& row = table[t];
        for (double r : rs) row.push_back(luxemburg_norm(r_maximal(f, r, intervals), p).value / nf);
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < row.size(); ++k) worst = std::max(worst, row[k] - row[k + 1]);
        outcomes[t].cases.push_back(make_case(trial_name(t, "monotone_in_r"), worst, 0.0,
                                              cfg.tolerances.relative * row.back()));
    });
    merge(report, outcomes);
    ojson by_r = ojson::array();
    for (std::size_t k = 0; k < rs.size(); ++k) {
        double m = 0.0;
        for (const auto& row : table)
            if (!row.empty()) m = std::max(m, row[k]);
        by_r.push_back({{"r", rs[k]}, {"max_ratio_lower_bound", m}});
    }
    report.diagnostics["max_ratio_by_r"] = by_r;
    return report;
}

VerificationReport interpolation_norm_check(const ExperimentConfig& cfg, const OperatorMatrix& A, double p0,
                                            double theta, const VariableExponent& p1) {
    VerificationReport report = start_report(cfg, "interpolation");
    const Grid g = cfg.grid.make();
    if (!(A.grid() == g)) throw ConfigError("operator matrix grid differs from the config grid");
    const auto check = verify_interpolation_decomposition(cfg.exponent, p0, theta, p1, g);
    if (!check.theta_in_range) throw ConfigError("theta must lie in (0, 1)");
    if (!(check.max_residual <= 1e-9))
        throw ConfigError("interpolation decomposition residual " + format_number(check.max_residual) +
                          " exceeds 1e-9");
    const auto pt = cfg.exponent.evaluate(g);
    const auto q1 = p1.evaluate(g);
    const auto trials = draw_family(cfg.family);

    struct Norms {
        bool zero = true;
        double af0 = 0, f0 = 0, af1 = 0, f1 = 0, aft = 0, ft = 0;
    };
    std::vector<Norms> ns(trials.size());
    parallel_for(trials.size(), [&](std::size_t t) {
        const SampledFunction f = trials[t].sample(g);
        if (f.max_abs() == 0.0) return;
        const SampledFunction Af = A.apply(f);
        auto& n = ns[t];
        n.zero = false;
        n.af0 = lebesgue_norm(Af, p0);
        n.f0 = lebesgue_norm(f, p0);
        n.af1 = luxemburg_norm(Af, q1).value;
        n.f1 = luxemburg_norm(f, q1).value;
        n.aft = luxemburg_norm(Af, pt).value;
        n.ft = luxemburg_norm(f, pt).value;
    });
    double R0 = 0.0, R1 = 0.0;
    for (const auto& n : ns) {
        if (n.zero) continue;
        R0 = std::max(R0, n.af0 / n.f0);
        R1 = std::max(R1, n.af1 / n.f1);
    }
    const double constant = 4.0 * std::pow(R0, theta) * std::pow(R1, 1.0 - theta);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        if (ns[t].zero) {
            report.skipped.push_back({trial_name(t, "interpolation_bound"), "zero function"});
            continue;
        }
        const double rhs = constant * ns[t].ft;
        report.add(trial_name(t, "interpolation_bound"), ns[t].aft, rhs, cfg.tolerances.relative * rhs);
        worst = std::max(worst, ns[t].aft / rhs);
    }
    report.diagnostics["p0"] = p0;
    report.diagnostics["theta"] = theta;
    report.diagnostics["p1"] = p1.to_json();
    report.diagnostics["decomposition_residual"] = check.max_residual;
    report.diagnostics["r0_lower_bound"] = R0;
    report.diagnostics["r1_lower_bound"] = R1;
    report.diagnostics["max_lhs_over_rhs"] = worst;
    return report;
}

VerificationReport interpolation_suite(const ExperimentConfig& cfg) {
    const auto& spec = cfg.operator_spec;
    const Grid g = cfg.grid.make();
    const std::string kind = spec.value("matrix", std::string("identity"));
    std::optional<OperatorMatrix> A;
    if (kind == "identity") {
        A = OperatorMatrix::identity(g);
    } else if (kind == "diagonal") {
        const auto c = sample_expression(spec.value("c", std::string("1 + exp(-x^2)")), g);
        A = OperatorMatrix::diagonal(g, c.values());
    } else if (kind == "band") {
        const double a = spec.value("a", -5.0), b = spec.value("b", 5.0);
        const std::size_t n = g.size();
        std::vector<Complex> e(n * n);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Complex> delta(n, Complex{});
            delta[j] = 1.0;
            const auto col = partial_fourier_integral(SampledFunction(g, std::move(delta)), a, b);
            for (std::size_t i = 0; i < n; ++i) e[i * n + j] = col[i];
        }
        A = OperatorMatrix(g, std::move(e));
    } else if (kind == "symbol") {
        A = pdo_matrix(Symbol::parse(spec.value("symbol", kDefaultSymbols[1])), g);
    } else {
        throw ConfigError("unknown matrix '" + kind + "' (expected identity, diagonal, band, symbol)");
    }
    const double p0 = spec.value("p0", 3.0);
    const double theta = spec.value("theta", 0.5);
    const VariableExponent p1 =
        spec.contains("p1") ? VariableExponent::from_json(spec.at("p1")) : VariableExponent::constant(1.5);
    auto report = interpolation_norm_check(cfg, *A, p0, theta, p1);
    report.diagnostics["matrix"] = kind;
    return report;
}

VerificationReport run_suite(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport r;
    try {
        if (cfg.suite == "inequalities")
            r = inequality_suite(cfg);
        else if (cfg.suite == "norm-ratio")
            r = norm_ratio_scan(cfg);
        else if (cfg.suite == "fefferman-stein")
            r = fefferman_stein_ratio(cfg);
        else if (cfg.suite == "self-improvement")
            r = self_improvement_scan(cfg);
        else if (cfg.suite == "interpolation")
            r = interpolation_suite(cfg);
        else
            throw ConfigError("unknown suite '" + cfg.suite +
                              "' (expected inequalities, norm-ratio, fefferman-stein, self-improvement, interpolation)");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed operator spec: ") + e.what());
    }
    if (cfg.record_wall_time)
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace modlab
