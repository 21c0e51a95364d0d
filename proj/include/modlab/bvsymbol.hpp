#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modlab/expr.hpp"

namespace modlab {

/// Raised when a variation cannot be certified finite (tail still growing at
/// the sampling horizon, or refinement not converging).
class NotBVCertifiable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VariationOptions {
    /// Horizon for the infinite tails.
    double lambda_max = 1e6;
    std::size_t initial_points = 1024;
    /// Refinement stops when doubling changes the variation by less than this, relatively.
    double rel_tol = 1e-8;
    std::size_t max_points = std::size_t{1} << 20;
};

/// Well-formed symbol text with inconsistent content (e.g. decreasing breakpoints).
class SemanticError : public ParseError {
public:
    using ParseError::ParseError;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Piecewise function of lambda on (-inf, b_1], (b_1, b_2], ..., (b_m, inf),
/// left-continuous at every breakpoint. Pieces may reference `x`, which is
/// fixed at construction (a section of a symbol).
class BVFunction {
public:
    BVFunction(std::vector<double> breakpoints, std::vector<Expression> pieces, double x = 0.0, double scale = 1.0);
    /// Single piece on the whole line.
    explicit BVFunction(Expression piece, double x = 0.0, double scale = 1.0);

    double operator()(double lambda) const;
    /// g(lambda + 0).
    double right_limit(double lambda) const;

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::size_t piece_count() const noexcept { return pieces_.size(); }
    /// Index of the piece that owns lambda, i.e. lambda in (b_{k-1}, b_k].
    std::size_t piece_index(double lambda) const noexcept;
    /// Value of piece k's expression at lambda (no ownership check).
    double piece_value(std::size_t k, double lambda) const;
    double scale() const noexcept { return scale_; }

private:
    std::vector<double> breakpoints_;
    std::vector<Expression> pieces_;
    double x_;
    double scale_;
};

/// Partial variation V_c^d over [c, d]; c may be -inf, d may be +inf.
double total_variation(const BVFunction& g, double c = -kInf, double d = kInf, const VariationOptions& opt = {});

/// Sampled sup norm over the refinement ladder.
double sup_norm(const BVFunction& g, const VariationOptions& opt = {});

/// sup|g| + V(g).
double v_norm(const BVFunction& g, const VariationOptions& opt = {});

/// Symbol a(x, lambda) = c(x) * g(x, lambda), parsed from the DSL
///
///   symbol   := [ 'x' ':' expr ';' ] 'lambda' ( ':' expr | piece { [';'] piece } )
///   piece    := 'on' interval ':' expr
///   interval := '(' bound ',' bound ( ']' | ')' )
///   bound    := number | '-inf' | 'inf'
///
/// Pieces must tile the line left to right, closed on the right at every
/// finite bound.
class Symbol {
public:
    static Symbol parse(std::string_view text);
    static Symbol constant(double value);

    double operator()(double x, double lambda) const;
    /// lambda -> a(x, lambda).
    BVFunction section(double x) const;
    /// The lambda pieces at x without the x factor.
    BVFunction lambda_part(double x) const;
    double x_factor(double x) const;
    /// True when the lambda pieces reference x (so sections are not just rescaled copies).
    bool pieces_depend_on_x() const noexcept;

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    /// Canonical DSL text; parse(to_string()) prints identically.
    std::string to_string() const;

private:
    Symbol() = default;

    std::optional<Expression> x_factor_;
    std::vector<double> breakpoints_;
    std::vector<Expression> pieces_;
};

/// ||a(x, .)||_V at each probe.
std::vector<double> section_v_norms(const Symbol& a, std::span<const double> x_probes, const VariationOptions& opt = {});

/// max over probes of ||a(x, .)||_V.
double linf_v_norm(const Symbol& a, std::span<const double> x_probes, const VariationOptions& opt = {});

struct CompactnessOptions {
    /// |x| values for the section-variation decay check.
    std::vector<double> x_ladder{0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    /// Probes per N in the tail-variation check, spread over [-N, N].
    std::size_t probes_per_n = 33;
    double threshold = 1e-6;
    VariationOptions variation{};
};

struct CompactnessCondition {
    bool pass = false;
    /// (a): max |a(x, +-lambda_max)| over probes.
    /// (b): V(a(x, .)) along the |x| ladder (max over +-x).
    /// (c): one row per N, sup over |x| <= N of the tail variations along the L ladder.
    std::vector<double> values;
    std::vector<std::vector<double>> table;
    std::string evidence;
};

struct CompactnessReport {
    CompactnessCondition vanishing_at_infinity;     // (a)
    CompactnessCondition variation_decay_in_x;      // (b)
    CompactnessCondition uniform_tail_variation;    // (c)
    bool all_pass() const noexcept {
        return vanishing_at_infinity.pass && variation_decay_in_x.pass && uniform_tail_variation.pass;
    }
};

CompactnessReport compactness_report(const Symbol& a, std::span<const double> n_list, std::span<const double> l_ladder,
                                     const CompactnessOptions& opt = {});

}  // namespace modlab
