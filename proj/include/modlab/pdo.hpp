#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "modlab/bvsymbol.hpp"
#include "modlab/grid.hpp"

namespace modlab {

/// Dense complex n x n matrix acting on sample vectors of a grid, row-major.
class OperatorMatrix {
public:
    OperatorMatrix(Grid grid, std::vector<Complex> entries);
    static OperatorMatrix identity(const Grid& g);
    static OperatorMatrix diagonal(const Grid& g, std::span<const Complex> d);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * size() + j]; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    SampledFunction apply(const SampledFunction& f) const;

    /// First line `n`, then one `i,j,re,im` row per entry.
    void write_csv(std::ostream& out) const;

private:
    Grid grid_;
    std::vector<Complex> entries_;
};

/// (a(x,D) f)(x_j) = (dlambda / 2pi) sum_k a(x_j, lambda_k) f_hat(lambda_k) e^{i x_j lambda_k}.
SampledFunction apply_pdo(const Symbol& a, const SampledFunction& f);

/// Matrix of f -> apply_pdo(a, f) on g; a = 1 gives the identity.
OperatorMatrix pdo_matrix(const Symbol& a, const Grid& g);

struct PointwiseBoundCheck {
    /// max_j |a(x,D)f| - 2 S*f ||a(x_j,.)||_V.
    double max_violation = 0.0;
    /// Same residual with constant 1 instead of 2.
    double max_violation_factor1 = 0.0;
    std::vector<double> margin_profile;
    std::vector<double> margin_profile_factor1;
    /// max|f| * max_j ||a(x_j,.)||_V, the natural size of both sides.
    double scale = 0.0;
};

PointwiseBoundCheck pointwise_bound_check(const Symbol& a, const SampledFunction& f,
                                          const VariationOptions& opt = {});

/// The same check from precomputed parts: Af = a(x,D)f, S = S*f over the full
/// frequency grid, and the section norms ||a(x_j,.)||_V.
PointwiseBoundCheck pointwise_bound_check(const SampledFunction& Af, const SampledFunction& S,
                                          std::span<const double> section_norms, double f_max);

/// The k largest singular values, non-increasing.
std::vector<double> singular_value_profile(const OperatorMatrix& m, std::size_t k);

/// sum_{i >= from} s_i^2 / sum_i s_i^2 for a full singular value list.
double tail_mass(const std::vector<double>& singular_values, std::size_t from);

}  // namespace modlab
