#pragma once

#include <cstddef>
#include <vector>

#include "modlab/grid.hpp"

namespace modlab {

/// Candidate intervals for the maximal operators.
///
/// Node j stands for the cell [x_j, x_j + h), so an interval is a run of
/// L >= 1 consecutive nodes of measure L*h, always inside the grid domain.
/// all_lengths admits every L in 1..n; dyadic_lengths admits L = 2^k <= n
/// plus the whole domain (L = n), which is what a longer dyadic interval
/// becomes after clipping.
class IntervalFamily {
public:
    enum class Mode { all_lengths, dyadic_lengths };

    explicit IntervalFamily(Mode mode = Mode::all_lengths) : mode_(mode) {}
    static IntervalFamily all() { return IntervalFamily(Mode::all_lengths); }
    static IntervalFamily dyadic() { return IntervalFamily(Mode::dyadic_lengths); }

    Mode mode() const noexcept { return mode_; }
    /// Admissible run lengths for an n-node grid, increasing.
    std::vector<std::size_t> run_lengths(std::size_t n) const;

private:
    Mode mode_;
};

/// (Mf)(x_m) = max over runs Q containing m of the mean of |f| over Q.
SampledFunction hardy_littlewood(const SampledFunction& f, const IntervalFamily& fam = IntervalFamily::all());

/// (M_r f) = (M(|f|^r))^{1/r}, r >= 1.
SampledFunction r_maximal(const SampledFunction& f, double r, const IntervalFamily& fam = IntervalFamily::all());

/// (M# f)(x_m) = max over runs Q containing m of the mean of |f - f_Q|, with
/// f_Q the complex mean over Q.
SampledFunction sharp_maximal(const SampledFunction& f, const IntervalFamily& fam = IntervalFamily::all());

/// Family used for M# when none is given: all lengths up to n = 512,
/// dyadic beyond.
IntervalFamily default_sharp_family(std::size_t n);

}  // namespace modlab
