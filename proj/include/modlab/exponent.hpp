#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modlab/expr.hpp"
#include "modlab/grid.hpp"

namespace modlab {

/// A variable exponent p(.) with values in [1, inf).
class VariableExponent {
public:
    enum class Kind { constant, closed_form, lerner, sampled, conjugate };

    static VariableExponent constant(double p);
    static VariableExponent closed_form(std::string_view expr);
    /// p(x) = p0 + mu sin(log log(1 + max{|x|, 1/|x|})); p(0) is taken as p0.
    static VariableExponent lerner(double p0, double mu);
    /// Piecewise-linear interpolation of node values, constant beyond the ends.
    static VariableExponent sampled(Grid grid, std::vector<double> values);

    /// {"kind":"constant","p":2}, {"kind":"expr","expr":"..."},
    /// {"kind":"lerner","p0":2,"mu":0.1}, or
    /// {"kind":"sampled","x_min":..,"x_max":..,"values":[...]}.
    static VariableExponent from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    double operator()(double x) const;
    std::vector<double> evaluate(const Grid& g) const;

    Kind kind() const noexcept { return kind_; }
    /// Value when the exponent is constant by construction.
    std::optional<double> constant_value() const noexcept;
    std::string describe() const;
    /// True for Lerner-type exponents (and their conjugates) with mu != 0,
    /// which oscillate in log log |x| and have no limit at zero or infinity.
    bool limit_free_by_construction() const noexcept;

    friend VariableExponent conjugate_exponent(const VariableExponent& p);

private:
    VariableExponent() = default;

    Kind kind_ = Kind::constant;
    double p_ = 2.0;
    double p0_ = 2.0;
    double mu_ = 0.0;
    Expression expr_;
    std::string expr_text_;
    std::optional<Grid> grid_;
    std::vector<double> values_;
    std::shared_ptr<const VariableExponent> base_;
};

/// p' with 1/p + 1/p' = 1. Constant and sampled inputs are checked eagerly;
/// other kinds throw on evaluation wherever p(x) <= 1.
VariableExponent conjugate_exponent(const VariableExponent& p);
/// Same, additionally probing p > 1 at every node of `g`.
VariableExponent conjugate_exponent(const VariableExponent& p, const Grid& g);

struct ExponentBounds {
    double p_minus;
    double p_plus;
    /// p_minus <= 1 + 1e-9 or p_plus >= 1e6.
    bool violates_bounds;
};

ExponentBounds exponent_bounds(const VariableExponent& p, const Grid& g);

struct LogHolderDiagnostics {
    double c0;
    double c_inf;
    std::optional<double> p_inf;
};

/// Lower estimates of the local and at-infinity log-Holder constants over the
/// grid. The grid must contain [-10, 10]. c_inf is measured against the
/// outer-decile median even when p_inf is reported as absent.
LogHolderDiagnostics log_holder_diagnostics(const VariableExponent& p, const Grid& g);

struct DecompositionCheck {
    double max_residual;
    /// False when theta is outside the open interval (0, 1).
    bool theta_in_range;
};

/// max_x |1/p(x) - theta/p0 - (1 - theta)/p1(x)|.
DecompositionCheck verify_interpolation_decomposition(const VariableExponent& p, double p0, double theta,
                                                      const VariableExponent& p1, const Grid& g);

}  // namespace modlab
