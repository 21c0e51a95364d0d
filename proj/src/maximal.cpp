#include "modlab/maximal.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace modlab {

std::vector<std::size_t> IntervalFamily::run_lengths(std::size_t n) const {
    std::vector<std::size_t> out;
    if (mode_ == Mode::all_lengths) {
        out.reserve(n);
        for (std::size_t L = 1; L <= n; ++L) out.push_back(L);
        return out;
    }
    for (std::size_t L = 1; L <= n; L *= 2) out.push_back(L);
    if (out.back() != n) out.push_back(n);
    return out;
}

IntervalFamily default_sharp_family(std::size_t n) {
    return n > 512 ? IntervalFamily::dyadic() : IntervalFamily::all();
}

namespace {

// out[m] = max(out[m], max{stat[i] : i <= m <= i + L - 1}) where stat[i]
// belongs to the run starting at node i.
void accumulate_window_max(const std::vector<double>& stat, std::size_t L, std::vector<double>& out) {
    const std::size_t n = out.size();
    const std::size_t starts = stat.size();
    std::deque<std::size_t> q;
    for (std::size_t m = 0; m < n; ++m) {
        if (m < starts) {
            while (!q.empty() && stat[q.back()] <= stat[m]) q.pop_back();
            q.push_back(m);
        }
        while (!q.empty() && q.front() + L <= m) q.pop_front();
        if (!q.empty()) out[m] = std::max(out[m], stat[q.front()]);
    }
}

std::vector<double> maximal_of_nonnegative(const std::vector<double>& w, const IntervalFamily& fam) {
    const std::size_t n = w.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + w[j];
    std::vector<double> out(n, 0.0);
    std::vector<double> stat;
    for (std::size_t L : fam.run_lengths(n)) {
        stat.assign(n - L + 1, 0.0);
        for (std::size_t i = 0; i + L <= n; ++i)
            stat[i] = std::max(0.0, (prefix[i + L] - prefix[i]) / static_cast<double>(L));
        accumulate_window_max(stat, L, out);
    }
    return out;
}

SampledFunction real_function(const Grid& g, const std::vector<double>& v) {
    return SampledFunction::from_real(g, v);
}

}  // namespace

SampledFunction hardy_littlewood(const SampledFunction& f, const IntervalFamily& fam) {
    return real_function(f.grid(), maximal_of_nonnegative(f.abs(), fam));
}

SampledFunction r_maximal(const SampledFunction& f, double r, const IntervalFamily& fam) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw std::invalid_argument("r-th maximal operator requires r in [1, inf)");
    if (r == 1.0) return hardy_littlewood(f, fam);
    // scale by max|f| so |f|^r neither underflows nor overflows
    const double top = f.max_abs();
    if (top == 0.0) return SampledFunction(f.grid());
    std::vector<double> w(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) w[j] = std::pow(std::abs(f[j]) / top, r);
    auto m = maximal_of_nonnegative(w, fam);
    for (double& v : m) v = top * std::pow(v, 1.0 / r);
    return real_function(f.grid(), m);
}

SampledFunction sharp_maximal(const SampledFunction& f, const IntervalFamily& fam) {
    const std::size_t n = f.size();
    std::vector<Complex> prefix(n + 1, Complex{});
    for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + f[j];
    std::vector<double> out(n, 0.0);
    std::vector<double> stat;
    for (std::size_t L : fam.run_lengths(n)) {
        stat.assign(n - L + 1, 0.0);
        const double inv = 1.0 / static_cast<double>(L);
        for (std::size_t i = 0; i + L <= n; ++i) {
            const Complex mean = (prefix[i + L] - prefix[i]) * inv;
            double osc = 0.0;
            for (std::size_t j = i; j < i + L; ++j) {
                const Complex d = f[j] - mean;
                osc += std::sqrt(d.real() * d.real() + d.imag() * d.imag());
            }
            stat[i] = osc * inv;
        }
        accumulate_window_max(stat, L, out);
    }
    return real_function(f.grid(), out);
}

}  // namespace modlab
