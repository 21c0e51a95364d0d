#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace modlab {

using Complex = std::complex<double>;

/// Uniform grid on [x_min, x_max) with n nodes x_j = x_min + j*h, h = (x_max - x_min)/n.
///
/// The conjugate frequency grid has spacing 2*pi/(n*h) and nodes
/// lambda_k = (k - n/2) * dlambda, so zero frequency is node n/2.
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double node(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * h_; }
    double frequency_spacing() const noexcept { return dlambda_; }
    double frequency(std::size_t k) const noexcept {
        return (static_cast<double>(k) - static_cast<double>(n_ / 2)) * dlambda_;
    }
    /// Largest |lambda_k| on the frequency grid, n/2 * dlambda.
    double nyquist() const noexcept { return static_cast<double>(n_ / 2) * dlambda_; }

    std::vector<double> nodes() const;
    std::vector<double> frequencies() const;

    /// Same bounds (exactly) and node count.
    bool operator==(const Grid& other) const noexcept = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double h_;
    double dlambda_;
};

Grid make_grid(double x_min, double x_max, std::size_t n);

/// Complex samples of a compactly supported function on a Grid.
class SampledFunction {
public:
    SampledFunction(Grid grid, std::vector<Complex> values);
    /// Zero function on the grid.
    explicit SampledFunction(Grid grid);
    static SampledFunction from_real(Grid grid, std::span<const double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const Complex> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    const Complex& operator[](std::size_t j) const noexcept { return values_[j]; }

    double max_abs() const noexcept;
    std::vector<double> abs() const;

    friend SampledFunction operator+(const SampledFunction& a, const SampledFunction& b);
    friend SampledFunction operator-(const SampledFunction& a, const SampledFunction& b);
    friend SampledFunction operator*(Complex s, const SampledFunction& f);

private:
    Grid grid_;
    std::vector<Complex> values_;
};

/// Coefficients f_hat(lambda_k) on the conjugate frequency grid of `grid`.
class SpectralFunction {
public:
    SpectralFunction(Grid grid, std::vector<Complex> coefficients);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const Complex> coefficients() const noexcept { return coefficients_; }
    std::size_t size() const noexcept { return coefficients_.size(); }
    const Complex& operator[](std::size_t k) const noexcept { return coefficients_[k]; }

private:
    Grid grid_;
    std::vector<Complex> coefficients_;
};

/// f_hat(lambda_k) = h * sum_j f(x_j) exp(-i x_j lambda_k).
SpectralFunction forward_fourier(const SampledFunction& f);

/// f(x_j) = (dlambda / 2pi) * sum_k F(lambda_k) exp(i x_j lambda_k).
SampledFunction inverse_fourier(const SpectralFunction& F);

/// Evaluates an expression in `x` at every node.
SampledFunction sample_expression(std::string_view expr, const Grid& g);

/// CSV with header `x,re,im`, one row per node, 17 significant digits.
void write_csv(std::ostream& out, const SampledFunction& f);

/// Reads the CSV written by write_csv; spacing must be uniform to 1e-9 relative.
SampledFunction read_csv(std::istream& in);

}  // namespace modlab
