#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "modlab/exponent.hpp"
#include "modlab/grid.hpp"
#include "modlab/pdo.hpp"

namespace modlab {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double x_min = -8.0;
    double x_max = 8.0;
    std::size_t n = 1024;
    Grid make() const { return Grid(x_min, x_max, n); }
};

/// Test-function generator. Kinds: "bump" (Gaussian exp(-(x-c)^2/w^2) e^{i beta x}),
/// "chi" (indicator of [a, a + length]), "constant", "zero".
struct FamilySpec {
    std::vector<std::string> kinds{"bump"};
    std::size_t trials = 32;
    std::uint64_t seed = 7;
    double center_min = -3.0, center_max = 3.0;
    double width_min = 0.3, width_max = 1.0;
    double beta_min = -4.0, beta_max = 4.0;
    double amplitude_min = 0.5, amplitude_max = 2.0;
    double chi_left_min = -4.0, chi_left_max = 3.0;
    double chi_length_min = 0.5, chi_length_max = 3.0;
};

struct Tolerances {
    /// Node-wise inequalities pass when lhs - rhs <= relative * scale.
    double relative = 1e-10;
    /// Largest accepted ratio change between n and 2n in the norm scans.
    double stability = 1.5;
};

/// Suites: "inequalities", "norm-ratio", "fefferman-stein", "self-improvement",
/// "interpolation". Suite-specific parameters live in `operator_spec`.
struct ExperimentConfig {
    std::string suite = "inequalities";
    GridSpec grid;
    VariableExponent exponent = VariableExponent::constant(2.0);
    FamilySpec family;
    nlohmann::json operator_spec = nlohmann::json::object();
    Tolerances tolerances;
    std::string output;
    bool record_wall_time = false;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

/// One drawn test function; parameters are kept so scans can perturb them.
struct TrialFunction {
    std::string kind;
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
    double beta = 0.0;
    double left = 0.0;
    double length = 1.0;

    SampledFunction sample(const Grid& g) const;
    nlohmann::ordered_json to_json() const;
};

/// Independent engine for (seed, stream): streams never depend on scheduling.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t stream);

std::vector<TrialFunction> draw_family(const FamilySpec& spec);

struct VerificationCase {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    /// lhs - rhs; the case passes when margin <= tolerance.
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SkippedCase {
    std::string name;
    std::string reason;
};

struct VerificationReport {
    std::string suite;
    nlohmann::ordered_json config;
    std::vector<VerificationCase> cases;
    std::vector<SkippedCase> skipped;
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    std::optional<double> wall_time;

    void add(std::string name, double lhs, double rhs, double tolerance);
    std::size_t n_pass() const noexcept;
    std::size_t n_fail() const noexcept;
    nlohmann::ordered_json to_json() const;
};

VerificationReport inequality_suite(const ExperimentConfig& cfg);
VerificationReport norm_ratio_scan(const ExperimentConfig& cfg);
VerificationReport fefferman_stein_ratio(const ExperimentConfig& cfg);
VerificationReport self_improvement_scan(const ExperimentConfig& cfg);
VerificationReport interpolation_norm_check(const ExperimentConfig& cfg, const OperatorMatrix& A, double p0,
                                            double theta, const VariableExponent& p1);
/// interpolation_norm_check with the operator and decomposition read from the config.
VerificationReport interpolation_suite(const ExperimentConfig& cfg);

/// Dispatches on cfg.suite and fills wall_time when requested.
VerificationReport run_suite(const ExperimentConfig& cfg);

}  // namespace modlab
