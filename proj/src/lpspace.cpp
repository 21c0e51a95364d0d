#include "modlab/lpspace.hpp"

#include <cmath>
#include <stdexcept>

namespace modlab {

double modular(const SampledFunction& f, std::span<const double> p_at_nodes, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("modular requires lambda > 0");
    if (p_at_nodes.size() != f.size()) throw std::invalid_argument("exponent samples do not match function size");
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double a = std::abs(f[j]) / lambda;
        if (a == 0.0) continue;
        sum += std::pow(a, p_at_nodes[j]);
    }
    return f.grid().spacing() * sum;
}

double modular(const SampledFunction& f, const VariableExponent& p, double lambda) {
    const auto ps = p.evaluate(f.grid());
    return modular(f, ps, lambda);
}

NormResult luxemburg_norm(const SampledFunction& f, std::span<const double> p_at_nodes) {
    const double top = f.max_abs();
    if (top == 0.0) return {};
    if (!std::isfinite(top)) throw std::invalid_argument("Luxemburg norm of a non-finite function");

    auto fits = [&](double lambda) { return modular(f, p_at_nodes, lambda) <= 1.0; };

    NormResult r;
    double hi = top;
    int doublings = 0;
    while (!fits(hi)) {
        hi *= 2.0;
        if (++doublings > 200) throw std::runtime_error("Luxemburg norm: failed to bracket within 200 doublings");
    }
    double lo = hi;
    int halvings = 0;
    while (fits(lo)) {
        lo *= 0.5;
        if (++halvings > 200) throw std::runtime_error("Luxemburg norm: failed to bracket within 200 halvings");
    }
    if (lo < hi * 0.5) hi = lo * 2.0;

    int it = 0;
    while (hi - lo > 1e-12 * hi && it < 200) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (fits(mid) ? hi : lo) = mid;
        ++it;
    }
    r.value = hi;
    r.lo = lo;
    r.hi = hi;
    r.iterations = it;
    return r;
}

NormResult luxemburg_norm(const SampledFunction& f, const VariableExponent& p) {
    const auto ps = p.evaluate(f.grid());
    return luxemburg_norm(f, ps);
}

double lebesgue_norm(const SampledFunction& f, double r) {
    if (!(r >= 1.0)) throw std::invalid_argument("Lebesgue norm requires r >= 1");
    const double top = f.max_abs();
    if (top == 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) sum += std::pow(std::abs(f[j]) / top, r);
    return top * std::pow(f.grid().spacing() * sum, 1.0 / r);
}

double distribution_measure(const SampledFunction& f, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("distribution measure requires lambda >= 0");
    std::size_t count = 0;
    for (std::size_t j = 0; j < f.size(); ++j) count += std::abs(f[j]) > lambda ? 1 : 0;
    return f.grid().spacing() * static_cast<double>(count);
}

double weak_type_ratio(const SampledFunction& Af, const SampledFunction& f, double r, std::span<const double> lambdas) {
    if (!(r > 1.0) || !std::isfinite(r)) throw std::invalid_argument("weak type ratio requires r in (1, inf)");
    const double norm = lebesgue_norm(f, r);
    if (norm == 0.0) throw std::invalid_argument("weak type ratio of the zero function");
    double best = 0.0;
    for (double lambda : lambdas) best = std::max(best, lambda * std::pow(distribution_measure(Af, lambda), 1.0 / r));
    return best / norm;
}

}  // namespace modlab
