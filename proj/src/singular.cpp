#include "modlab/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modlab {

namespace {

constexpr double kAlignTol = 1e-9;

double modulus(Complex z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Index k with lambda_k == value (within kAlignTol bins), or -1.
long aligned_index(const Grid& g, double value) {
    const double t = value / g.frequency_spacing() + static_cast<double>(g.size() / 2);
    const double r = std::round(t);
    if (std::abs(t - r) > kAlignTol) return -1;
    if (r < 0.0 || r > static_cast<double>(g.size() - 1)) return -1;
    return static_cast<long>(r);
}

// Number of frequency nodes strictly below `value` (aligned nodes excluded).
std::size_t count_below(const Grid& g, double value) {
    const long k = aligned_index(g, value);
    if (k >= 0) return static_cast<std::size_t>(k);
    const double t = value / g.frequency_spacing() + static_cast<double>(g.size() / 2);
    if (t <= 0.0) return 0;
    return std::min(g.size(), static_cast<std::size_t>(std::floor(t)) + 1);
}

void take_max(std::vector<double>& acc, const SampledFunction& f) {
    for (std::size_t j = 0; j < f.size(); ++j) acc[j] = std::max(acc[j], modulus(f[j]));
}

double cross(Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

// Diameter of a planar point set: monotone-chain hull, then rotating calipers.
double diameter(std::vector<Complex>& pts) {
    if (pts.size() < 2) return 0.0;
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    std::vector<Complex> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i > 0; --i) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0.0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k > 1 ? k - 1 : k);
    const std::size_t m = hull.size();
    if (m == 1) return 0.0;
    if (m == 2) return modulus(hull[0] - hull[1]);

    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t ni = (i + 1) % m;
        while (std::abs(cross(hull[i], hull[ni], hull[(j + 1) % m])) > std::abs(cross(hull[i], hull[ni], hull[j])))
            j = (j + 1) % m;
        best = std::max({best, modulus(hull[i] - hull[j]), modulus(hull[ni] - hull[j])});
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------

ModulationFamily::ModulationFamily(std::vector<double> alphas, const Grid& g) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw std::invalid_argument("modulation family must be non-empty");
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
        if (!std::isfinite(alphas_[i])) throw std::invalid_argument("modulation frequencies must be finite");
        if (i > 0 && !(alphas_[i] > alphas_[i - 1]))
            throw std::invalid_argument("modulation frequencies must be strictly increasing");
    }
    grid_aligned_ = std::all_of(alphas_.begin(), alphas_.end(), [&](double a) { return aligned_index(g, a) >= 0; });
}

ModulationFamily ModulationFamily::frequency_grid(const Grid& g) { return ModulationFamily(g.frequencies(), g); }

ModulationFamily ModulationFamily::all_cuts(const Grid& g) {
    const double d = g.frequency_spacing();
    std::vector<double> alphas;
    alphas.reserve(2 * g.size() + 1);
    alphas.push_back(g.frequency(0) - 0.5 * d);
    for (std::size_t k = 0; k < g.size(); ++k) {
        alphas.push_back(g.frequency(k));
        alphas.push_back(g.frequency(k) + 0.5 * d);
    }
    return ModulationFamily(std::move(alphas), g);
}

ModulationFamily ModulationFamily::frequency_band(const Grid& g, double max_abs) {
    std::vector<double> alphas;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (std::abs(g.frequency(k)) <= max_abs * (1.0 + 1e-12)) alphas.push_back(g.frequency(k));
    }
    return ModulationFamily(std::move(alphas), g);
}

PhaseFamily::PhaseFamily(Grid grid, std::vector<std::vector<double>> phases)
    : grid_(grid), phases_(std::move(phases)) {
    if (phases_.empty()) throw std::invalid_argument("phase family must be non-empty");
    for (const auto& p : phases_) {
        if (p.size() != grid_.size()) throw std::invalid_argument("phase length does not match grid");
        for (double v : p) {
            if (!std::isfinite(v)) throw std::invalid_argument("phases must be finite");
        }
    }
}

PhaseFamily PhaseFamily::linear(const ModulationFamily& fam, const Grid& g) {
    std::vector<std::vector<double>> phases;
    phases.reserve(fam.size());
    for (double a : fam.alphas()) {
        std::vector<double> p(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) p[j] = a * g.node(j);
        phases.push_back(std::move(p));
    }
    return PhaseFamily(g, std::move(phases));
}

// ---------------------------------------------------------------------------

SampledFunction hilbert_multiplier(const SampledFunction& f) {
    const auto F = forward_fourier(f);
    const std::size_t n = F.size();
    std::vector<Complex> c(F.coefficients().begin(), F.coefficients().end());
    const Complex minus_i{0.0, -1.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double sgn = k < n / 2 ? -1.0 : (k == n / 2 ? 0.0 : 1.0);
        c[k] *= minus_i * sgn;
    }
    return inverse_fourier(SpectralFunction(F.grid(), std::move(c)));
}

SampledFunction hilbert_quadrature(const SampledFunction& f, double eps) {
    const Grid& g = f.grid();
    const double h = g.spacing();
    if (!(eps >= 0.5 * h * (1.0 - 1e-12))) throw std::invalid_argument("truncation eps must be at least h/2");
    const std::size_t n = f.size();
    const double ratio = eps / h;
    if (ratio >= static_cast<double>(n)) return SampledFunction(g);
    const auto d_min = static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12))) + 1;

    std::vector<double> inv(n, 0.0);
    for (std::size_t d = 1; d < n; ++d) inv[d] = 1.0 / static_cast<double>(d);
    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc{};
        for (std::size_t d = d_min; d <= j; ++d) acc += f[j - d] * inv[d];
        for (std::size_t d = d_min; j + d < n; ++d) acc -= f[j + d] * inv[d];
        out[j] = acc / std::numbers::pi;
    }
    return SampledFunction(g, std::move(out));
}

SampledFunction maximal_hilbert(const SampledFunction& f) {
    const std::size_t n = f.size();
    std::vector<double> inv(n, 0.0);
    for (std::size_t d = 1; d < n; ++d) inv[d] = 1.0 / static_cast<double>(d);
    const auto v = f.values();
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        // walk the truncation ladder from eps > diameter down to h/2
        double re = 0.0, im = 0.0, best = 0.0;
        const std::size_t start = std::max(j, n - 1 - j);
        for (std::size_t d = start; d >= 1; --d) {
            Complex term{};
            if (d <= j) term += v[j - d];
            if (j + d < n) term -= v[j + d];
            re += term.real() * inv[d];
            im += term.imag() * inv[d];
            best = std::max(best, re * re + im * im);
        }
        out[j] = std::sqrt(best) / std::numbers::pi;
    }
    return SampledFunction::from_real(f.grid(), out);
}

SampledFunction modulate(const SampledFunction& f, std::span<const double> phase) {
    if (phase.size() != f.size()) throw std::invalid_argument("phase does not live on the function's grid");
    std::vector<Complex> out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = unit_phase(-phase[j]) * f[j];
    return SampledFunction(f.grid(), std::move(out));
}

SampledFunction modulate_linear(const SampledFunction& f, double alpha) {
    const Grid& g = f.grid();
    std::vector<Complex> out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = unit_phase(-alpha * g.node(j)) * f[j];
    return SampledFunction(g, std::move(out));
}

SampledFunction partial_fourier_integral(const SampledFunction& f, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("partial Fourier integral requires a < b");
    const auto F = forward_fourier(f);
    const Grid& g = f.grid();
    const long ka = aligned_index(g, a);
    const long kb = aligned_index(g, b);
    std::vector<Complex> c(F.coefficients().begin(), F.coefficients().end());
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto ks = static_cast<long>(k);
        double m;
        if (ks == ka || ks == kb) {
            m = 0.5;
        } else {
            const double lam = g.frequency(k);
            m = (lam > a && lam < b) ? 1.0 : 0.0;
        }
        c[k] *= m;
    }
    return inverse_fourier(SpectralFunction(g, std::move(c)));
}

SampledFunction partial_fourier_integral_via_hilbert(const SampledFunction& f, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("partial Fourier integral requires a < b");
    const auto ha = modulate_linear(hilbert_multiplier(modulate_linear(f, a)), -a);
    const auto hb = modulate_linear(hilbert_multiplier(modulate_linear(f, b)), -b);
    return Complex{0.0, 0.5} * (ha - hb);
}

SampledFunction s_star(const SampledFunction& f, const ModulationFamily& fam) {
    if (fam.size() < 2) throw std::invalid_argument("S* needs at least two frequencies");
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    const auto F = forward_fourier(f);
    const double scale = g.frequency_spacing() / (2.0 * std::numbers::pi);

    // Q(alpha) = sum_{lambda_k < alpha} c_k + (1/2) c_alpha when alpha is a node
    std::vector<std::size_t> below(fam.size());
    std::vector<long> node(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        below[i] = count_below(g, fam.alphas()[i]);
        node[i] = aligned_index(g, fam.alphas()[i]);
    }

    std::vector<Complex> prefix(n + 1);
    std::vector<Complex> terms(n);
    std::vector<Complex> pts(fam.size());
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.node(j);
        for (std::size_t k = 0; k < n; ++k) terms[k] = scale * F[k] * unit_phase(x * g.frequency(k));
        prefix[0] = Complex{};
        for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + terms[k];
        for (std::size_t i = 0; i < fam.size(); ++i) {
            pts[i] = prefix[below[i]];
            if (node[i] >= 0) pts[i] += 0.5 * terms[static_cast<std::size_t>(node[i])];
        }
        out[j] = diameter(pts);
    }
    return SampledFunction::from_real(g, out);
}

SampledFunction s_star(const SampledFunction& f) { return s_star(f, ModulationFamily::all_cuts(f.grid())); }

SampledFunction carleson(const SampledFunction& f, const ModulationFamily& fam, HilbertBase base) {
    const double eps = 0.5 * f.grid().spacing();
    std::vector<double> out(f.size(), 0.0);
    for (double a : fam.alphas()) {
        const auto g = modulate_linear(f, a);
        take_max(out, base == HilbertBase::multiplier ? hilbert_multiplier(g) : hilbert_quadrature(g, eps));
    }
    return SampledFunction::from_real(f.grid(), out);
}

SampledFunction carleson(const SampledFunction& f) { return carleson(f, ModulationFamily::frequency_grid(f.grid())); }

SampledFunction maximal_carleson(const SampledFunction& f, const ModulationFamily& fam) {
    std::vector<double> out(f.size(), 0.0);
    for (double a : fam.alphas()) take_max(out, maximal_hilbert(modulate_linear(f, a)));
    return SampledFunction::from_real(f.grid(), out);
}

SampledFunction maximally_modulated(const Transform& base, const PhaseFamily& phases, const SampledFunction& f) {
    if (!(phases.grid() == f.grid())) throw std::invalid_argument("phase family lives on a different grid");
    std::vector<double> out(f.size(), 0.0);
    for (const auto& phase : phases.phases()) take_max(out, base(modulate(f, phase)));
    return SampledFunction::from_real(f.grid(), out);
}

}  // namespace modlab
