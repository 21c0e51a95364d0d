#pragma once

#include <span>

#include "modlab/exponent.hpp"
#include "modlab/grid.hpp"

namespace modlab {

struct NormResult {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int iterations = 0;
};

/// Rectangle-rule modular h * sum_j |f_j / lambda|^{p(x_j)}.
double modular(const SampledFunction& f, const VariableExponent& p, double lambda);

/// Same, with the exponent already evaluated at the nodes of f's grid.
double modular(const SampledFunction& f, std::span<const double> p_at_nodes, double lambda);

/// Luxemburg norm inf{lambda > 0 : modular(f, p, lambda) <= 1}, by bisection
/// to a relative bracket width of 1e-12. value is the upper bracket end.
NormResult luxemburg_norm(const SampledFunction& f, const VariableExponent& p);
NormResult luxemburg_norm(const SampledFunction& f, std::span<const double> p_at_nodes);

/// (h * sum |f_j|^r)^{1/r}.
double lebesgue_norm(const SampledFunction& f, double r);

/// h * #{j : |f_j| > lambda}.
double distribution_measure(const SampledFunction& f, double lambda);

/// sup over lambdas of lambda * distribution_measure(Af, lambda)^{1/r} / ||f||_r.
double weak_type_ratio(const SampledFunction& Af, const SampledFunction& f, double r, std::span<const double> lambdas);

}  // namespace modlab
