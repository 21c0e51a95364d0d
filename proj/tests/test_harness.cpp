#include <gtest/gtest.h>

#include <cstdlib>

#include "modlab/harness.hpp"
#include "modlab/parallel.hpp"

using namespace modlab;
using nlohmann::json;

namespace {

ExperimentConfig small(const std::string& suite, std::size_t n = 256, std::size_t trials = 6) {
    ExperimentConfig c;
    c.suite = suite;
    c.grid = {-8.0, 8.0, n};
    c.family.trials = trials;
    return c;
}

std::string report_text(const ExperimentConfig& c, const char* threads) {
    ::setenv("MODLAB_THREADS", threads, 1);
    const auto text = run_suite(c).to_json().dump(2);
    ::setenv("MODLAB_THREADS", "2", 1);
    return text;
}

std::size_t count_named(const VerificationReport& r, const std::string& what) {
    std::size_t k = 0;
    for (const auto& c : r.cases) k += c.name.find(what) != std::string::npos;
    return k;
}

}  // namespace

TEST(Parallel, EveryIndexOnceAndErrorsPropagate) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 8);
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_for(10, [](std::size_t i) { if (i == 3) throw std::runtime_error("x"); }, 4),
                 std::runtime_error);
    parallel_for(0, [](std::size_t) { FAIL(); }, 4);
}

TEST(Config, RoundTripAndErrors) {
    const json j = json::parse(R"({
        "suite": "norm-ratio",
        "grid": {"x_min": -4, "x_max": 4, "n": 128},
        "exponent": {"kind": "lerner", "p0": 2, "mu": 0.1},
        "family": {"kinds": ["bump", "chi"], "trials": 3, "seed": 11, "beta": [-1, 1]},
        "operator": {"operators": ["C"]},
        "tolerances": {"relative": 1e-9},
        "output": "out.json"
    })");
    const auto c = ExperimentConfig::from_json(j);
    EXPECT_EQ(c.grid.n, 128u);
    EXPECT_EQ(c.family.seed, 11u);
    EXPECT_EQ(c.family.beta_max, 1.0);
    const auto again = ExperimentConfig::from_json(json::parse(c.to_json().dump()));
    EXPECT_EQ(again.to_json().dump(), c.to_json().dump());

    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"grid": {"n": 101}})")), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"typo": 1})")), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"family": {"seed": -1}})")), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"family": {"kinds": ["spline"]}})")), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"exponent": {"kind": "constant", "p": 0.5}})")),
                 std::exception);
    EXPECT_THROW(run_suite(small("nonsense")), ConfigError);
}

TEST(Family, DeterministicDraws) {
    FamilySpec s;
    s.kinds = {"bump", "chi", "zero"};
    s.trials = 7;
    const auto a = draw_family(s), b = draw_family(s);
    for (std::size_t t = 0; t < a.size(); ++t) EXPECT_EQ(a[t].to_json().dump(), b[t].to_json().dump());
    EXPECT_EQ(a[1].kind, "chi");
    EXPECT_EQ(a[2].amplitude, 0.0);
    s.trials = 9;
    const auto c = draw_family(s);
    EXPECT_EQ(c[3].to_json().dump(), a[3].to_json().dump());  // growing the family keeps earlier draws
    auto e1 = trial_engine(1, 0), e2 = trial_engine(1, 1);
    EXPECT_NE(e1(), e2());
}

TEST(Report, MarginSignAndSummary) {
    VerificationReport r;
    r.suite = "x";
    r.add("ok", 1.0, 2.0, 0.0);
    r.add("bad", 3.0, 2.0, 0.5);
    EXPECT_EQ(r.n_pass(), 1u);
    EXPECT_EQ(r.n_fail(), 1u);
    EXPECT_EQ(r.cases[0].margin, -1.0);
    const auto j = r.to_json();
    EXPECT_EQ(j["summary"]["n_fail"], 1);
    EXPECT_EQ(j["summary"]["max_margin"], 1.0);
    EXPECT_TRUE(j["wall_time"].is_null());
}

TEST(Inequalities, PassOnBumps) {
    const auto r = inequality_suite(small("inequalities"));
    EXPECT_EQ(r.n_fail(), 0u);
    EXPECT_EQ(count_named(r, "s_star_le_carleson"), 6u);
    EXPECT_EQ(count_named(r, "band_restriction_two_paths"), 6u);
    EXPECT_EQ(count_named(r, "pdo_pointwise_bound"), 30u);
    EXPECT_TRUE(r.skipped.empty());
}

TEST(Inequalities, ZeroTrialAndNonAlignedFamily) {
    auto c = small("inequalities", 128, 2);
    c.family.kinds = {"zero", "chi"};
    c.operator_spec = {{"alphas", {{"list", {-1.0, 0.05, 1.0}}}}};
    const auto r = inequality_suite(c);
    EXPECT_EQ(r.n_fail(), 0u);
    EXPECT_EQ(count_named(r, "s_star_le_carleson"), 0u);
    ASSERT_EQ(r.skipped.size(), 4u);
    EXPECT_NE(r.skipped[0].reason.find("grid-aligned"), std::string::npos);
}

TEST(Inequalities, ChiTrialsReachTheWrapBand) {
    auto c = small("inequalities", 128, 1);
    c.family.kinds = {"chi"};
    const auto r = inequality_suite(c);
    EXPECT_EQ(r.n_fail(), 0u);
    ASSERT_EQ(r.skipped.size(), 2u);
    EXPECT_NE(r.skipped[0].reason.find("wrap"), std::string::npos);
}

TEST(Determinism, ThreadCountDoesNotChangeReports) {
    for (const char* suite : {"inequalities", "fefferman-stein", "self-improvement"}) {
        auto c = small(suite, 128, 5);
        c.family.kinds = {"bump", "chi"};
        const auto one = report_text(c, "1");
        EXPECT_EQ(one, report_text(c, "2")) << suite;
        EXPECT_EQ(one, report_text(c, "8")) << suite;
    }
    auto c = small("norm-ratio", 128, 4);
    c.operator_spec = {{"refinement_rounds", 5}};
    EXPECT_EQ(report_text(c, "1"), report_text(c, "8"));
}

TEST(NormRatio, IdentityIsStable) {
    auto c = small("norm-ratio", 128, 4);
    c.operator_spec = {{"operators", {"identity", "double"}}, {"refinement_rounds", 3}};
    const auto r = norm_ratio_scan(c);
    EXPECT_EQ(r.n_fail(), 0u);
    EXPECT_NEAR(r.diagnostics["operators"]["identity"]["max_ratio_lower_bound"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(r.diagnostics["operators"]["double"]["max_ratio_lower_bound"].get<double>(), 2.0, 1e-12);
    c.operator_spec = {{"operators", {"bogus"}}};
    EXPECT_THROW(norm_ratio_scan(c), ConfigError);
    c.operator_spec = json::object();
    c.exponent = VariableExponent::constant(1.0);
    EXPECT_THROW(norm_ratio_scan(c), ConfigError);
}

TEST(FeffermanStein, SkipsConstantsAndZero) {
    auto c = small("fefferman-stein", 128, 4);
    c.family.kinds = {"bump", "zero", "constant", "chi"};
    const auto r = fefferman_stein_ratio(c);
    EXPECT_EQ(r.n_fail(), 0u);
    EXPECT_EQ(r.cases.size(), 2u);
    EXPECT_EQ(r.skipped.size(), 2u);
    EXPECT_GT(r.diagnostics["c_sharp_lower_bound"].get<double>(), 0.0);
    c.family.kinds = {"constant"};
    EXPECT_THROW(fefferman_stein_ratio(c), ConfigError);
}

TEST(SelfImprovement, MonotoneInR) {
    auto c = small("self-improvement", 128, 4);
    c.family.kinds = {"bump", "chi"};
    const auto r = self_improvement_scan(c);
    EXPECT_EQ(r.n_fail(), 0u);
    EXPECT_EQ(r.cases.size(), 4u);
    EXPECT_GE(r.diagnostics["max_ratio_by_r"][0]["max_ratio_lower_bound"].get<double>(), 1.0 - 1e-12);
}

TEST(Interpolation, ConstantFourHolds) {
    for (const char* m : {"identity", "diagonal", "band"}) {
        auto c = small("interpolation", 128, 5);
        c.family.kinds = {"bump", "chi"};
        c.operator_spec = {{"matrix", m}};
        const auto r = interpolation_suite(c);
        EXPECT_EQ(r.n_fail(), 0u) << m;
        EXPECT_EQ(r.cases.size(), 5u) << m;
    }
}

TEST(Interpolation, RejectsInconsistentDecomposition) {
    auto c = small("interpolation", 64, 2);
    EXPECT_THROW(interpolation_norm_check(c, OperatorMatrix::identity(c.grid.make()), 3.0, 0.5,
                                          VariableExponent::constant(2.0)),
                 ConfigError);
    EXPECT_THROW(interpolation_norm_check(c, OperatorMatrix::identity(c.grid.make()), 3.0, 1.5,
                                          VariableExponent::constant(1.5)),
                 ConfigError);
    EXPECT_THROW(interpolation_norm_check(c, OperatorMatrix::identity(Grid(-1, 1, 64)), 3.0, 0.5,
                                          VariableExponent::constant(1.5)),
                 ConfigError);
}
