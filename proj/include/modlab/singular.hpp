#pragma once

#include <functional>
#include <span>
#include <vector>

#include "modlab/grid.hpp"

namespace modlab {

/// Finite set of linear phases psi_alpha(x) = alpha * x.
class ModulationFamily {
public:
    /// alphas must be non-empty and strictly increasing. grid_aligned is
    /// computed: every alpha within 1e-9 bins of a frequency node of `g`.
    ModulationFamily(std::vector<double> alphas, const Grid& g);

    /// Every node of the frequency grid.
    static ModulationFamily frequency_grid(const Grid& g);
    /// Every node, every midpoint between neighbours, and one half-step
    /// beyond each end: all distinct band cuts, half-weighted and full.
    static ModulationFamily all_cuts(const Grid& g);
    /// Frequency nodes with |lambda| <= max_abs.
    static ModulationFamily frequency_band(const Grid& g, double max_abs);

    std::span<const double> alphas() const noexcept { return alphas_; }
    std::size_t size() const noexcept { return alphas_.size(); }
    bool grid_aligned() const noexcept { return grid_aligned_; }

private:
    std::vector<double> alphas_;
    bool grid_aligned_;
};

/// Real-valued phases phi_alpha sampled on a grid.
class PhaseFamily {
public:
    PhaseFamily(Grid grid, std::vector<std::vector<double>> phases);
    static PhaseFamily linear(const ModulationFamily& fam, const Grid& g);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<std::vector<double>>& phases() const noexcept { return phases_; }

private:
    Grid grid_;
    std::vector<std::vector<double>> phases_;
};

using Transform = std::function<SampledFunction(const SampledFunction&)>;

enum class HilbertBase { multiplier, quadrature };

/// Spectral Hilbert transform: multiplier -i sgn(lambda), sgn(0) = 0.
SampledFunction hilbert_multiplier(const SampledFunction& f);

/// (H_eps f)(x_j) = (h/pi) sum_{|x_j - x_l| > eps} f_l / (x_j - x_l), eps >= h/2.
SampledFunction hilbert_quadrature(const SampledFunction& f, double eps);

/// max over eps in {(m + 1/2) h : m = 0..n-1} of |H_eps f|.
SampledFunction maximal_hilbert(const SampledFunction& f);

/// e^{-i phase(x)} f(x).
SampledFunction modulate(const SampledFunction& f, std::span<const double> phase);
/// e^{-i alpha x} f(x).
SampledFunction modulate_linear(const SampledFunction& f, double alpha);

/// Spectral band restriction with multiplier 1 on (a, b), 1/2 at a or b
/// when they are frequency nodes, 0 elsewhere.
SampledFunction partial_fourier_integral(const SampledFunction& f, double a, double b);

/// The same band restriction through modulated Hilbert transforms:
/// (i/2) [e^{iax} H(e^{-iax} f) - e^{ibx} H(e^{-ibx} f)].
SampledFunction partial_fourier_integral_via_hilbert(const SampledFunction& f, double a, double b);

/// max over pairs a < b from fam of |S_(a,b) f|, as the diameter of the
/// partial-sum point set at each node.
SampledFunction s_star(const SampledFunction& f, const ModulationFamily& fam);
/// Over every band of the grid (ModulationFamily::all_cuts).
SampledFunction s_star(const SampledFunction& f);

/// max over alpha of |H(e^{-i alpha x} f)| with the chosen Hilbert realization
/// (quadrature uses the densest truncation eps = h/2).
SampledFunction carleson(const SampledFunction& f, const ModulationFamily& fam,
                         HilbertBase base = HilbertBase::multiplier);
SampledFunction carleson(const SampledFunction& f);

/// max over alpha of H*(e^{-i alpha x} f).
SampledFunction maximal_carleson(const SampledFunction& f, const ModulationFamily& fam);

/// max over phases of |base(e^{-i phi} f)|.
SampledFunction maximally_modulated(const Transform& base, const PhaseFamily& phases, const SampledFunction& f);

}  // namespace modlab
