#include "modlab/pdo.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "modlab/singular.hpp"

namespace modlab {

OperatorMatrix::OperatorMatrix(Grid grid, std::vector<Complex> entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
    if (entries_.size() != grid_.size() * grid_.size())
        throw std::invalid_argument("operator matrix must have n * n entries");
}

OperatorMatrix OperatorMatrix::identity(const Grid& g) {
    std::vector<Complex> d(g.size(), Complex{1.0, 0.0});
    return diagonal(g, d);
}

OperatorMatrix OperatorMatrix::diagonal(const Grid& g, std::span<const Complex> d) {
    const std::size_t n = g.size();
    if (d.size() != n) throw std::invalid_argument("diagonal length must match the grid");
    std::vector<Complex> e(n * n, Complex{});
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = d[i];
    return OperatorMatrix(g, std::move(e));
}

SampledFunction OperatorMatrix::apply(const SampledFunction& f) const {
    if (!(f.grid() == grid_)) throw std::invalid_argument("function grid does not match the operator grid");
    const std::size_t n = size();
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc{};
        const Complex* row = entries_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * f[j];
        out[i] = acc;
    }
    return SampledFunction(grid_, std::move(out));
}

void OperatorMatrix::write_csv(std::ostream& out) const {
    const std::size_t n = size();
    const auto old = out.precision(17);
    out << n << '\n';
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Complex& v = (*this)(i, j);
            out << i << ',' << j << ',' << v.real() << ',' << v.imag() << '\n';
        }
    out.precision(old);
}

namespace {

// w[m] = exp(2 pi i m / n), so exp(i j h lambda_k) = w[(j * (k - n/2)) mod n].
std::vector<Complex> roots_of_unity(std::size_t n) {
    std::vector<Complex> w(n);
    for (std::size_t m = 0; m < n; ++m)
        w[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
    return w;
}

std::size_t shifted(std::size_t k, std::size_t n) { return (k + n - n / 2) % n; }

std::vector<double> symbol_row(const Symbol& a, double x, const std::vector<double>& lambdas) {
    std::vector<double> row(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) row[k] = a(x, lambdas[k]);
    return row;
}

}  // namespace

SampledFunction apply_pdo(const Symbol& a, const SampledFunction& f) {
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    const SpectralFunction F = forward_fourier(f);
    const auto lambdas = g.frequencies();

    if (!a.pieces_depend_on_x()) {
        // a = c(x) m(lambda): one multiplier, then a pointwise factor
        const BVFunction m = a.lambda_part(0.0);
        std::vector<Complex> G(n);
        for (std::size_t k = 0; k < n; ++k) G[k] = m(lambdas[k]) * F[k];
        const SampledFunction u = inverse_fourier(SpectralFunction(g, std::move(G)));
        std::vector<Complex> out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = a.x_factor(g.node(j)) * u[j];
        return SampledFunction(g, std::move(out));
    }

    const auto w = roots_of_unity(n);
    std::vector<Complex> base(n);  // f_hat(lambda_k) e^{i x_min lambda_k}
    for (std::size_t k = 0; k < n; ++k) base[k] = F[k] * std::polar(1.0, g.x_min() * lambdas[k]);
    const double weight = g.frequency_spacing() / (2.0 * std::numbers::pi);
    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto row = symbol_row(a, g.node(j), lambdas);
        Complex acc{};
        for (std::size_t k = 0; k < n; ++k) acc += row[k] * base[k] * w[(j * shifted(k, n)) % n];
        out[j] = weight * acc;
    }
    return SampledFunction(g, std::move(out));
}

OperatorMatrix pdo_matrix(const Symbol& a, const Grid& g) {
    const std::size_t n = g.size();
    const auto lambdas = g.frequencies();
    const auto w = roots_of_unity(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<Complex> e(n * n);

    // M_ij = (1/n) sum_k a(x_i, lambda_k) exp(i (x_i - x_j) lambda_k)
    auto fill_row = [&](std::size_t i, const std::vector<double>& sym) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t d = (i + n - j) % n;
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += sym[k] * w[(d * shifted(k, n)) % n];
            e[i * n + j] = inv_n * acc;
        }
    };

    if (!a.pieces_depend_on_x()) {
        // rows differ only by the x factor: build the convolution kernel once
        std::vector<double> unit(n);
        const BVFunction m = a.lambda_part(0.0);
        for (std::size_t k = 0; k < n; ++k) unit[k] = m(lambdas[k]);
        std::vector<Complex> kernel(n);
        for (std::size_t d = 0; d < n; ++d) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += unit[k] * w[(d * shifted(k, n)) % n];
            kernel[d] = inv_n * acc;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double c = a.x_factor(g.node(i));
            for (std::size_t j = 0; j < n; ++j) e[i * n + j] = c * kernel[(i + n - j) % n];
        }
        return OperatorMatrix(g, std::move(e));
    }

    for (std::size_t i = 0; i < n; ++i) fill_row(i, symbol_row(a, g.node(i), lambdas));
    return OperatorMatrix(g, std::move(e));
}

PointwiseBoundCheck pointwise_bound_check(const SampledFunction& Af, const SampledFunction& S,
                                          std::span<const double> section_norms, double f_max) {
    const std::size_t n = Af.size();
    if (S.size() != n || section_norms.size() != n) throw std::invalid_argument("bound check inputs differ in length");
    PointwiseBoundCheck r;
    r.margin_profile.resize(n);
    r.margin_profile_factor1.resize(n);
    r.max_violation = -kInf;
    r.max_violation_factor1 = -kInf;
    for (std::size_t j = 0; j < n; ++j) {
        const double lhs = std::abs(Af[j]);
        const double env = S[j].real() * section_norms[j];
        r.margin_profile[j] = lhs - 2.0 * env;
        r.margin_profile_factor1[j] = lhs - env;
        r.max_violation = std::max(r.max_violation, r.margin_profile[j]);
        r.max_violation_factor1 = std::max(r.max_violation_factor1, r.margin_profile_factor1[j]);
    }
    r.scale = f_max * *std::max_element(section_norms.begin(), section_norms.end());
    return r;
}

PointwiseBoundCheck pointwise_bound_check(const Symbol& a, const SampledFunction& f, const VariationOptions& opt) {
    const auto norms = section_v_norms(a, f.grid().nodes(), opt);
    return pointwise_bound_check(apply_pdo(a, f), s_star(f), norms, f.max_abs());
}

std::vector<double> singular_value_profile(const OperatorMatrix& m, std::size_t k) {
    const std::size_t n = m.size();
    if (k < 1 || k > n) throw std::invalid_argument("singular value count must be in 1..n");
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Complex v = m(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("operator matrix has non-finite entries");
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = s(static_cast<Eigen::Index>(i));
    return out;
}

double tail_mass(const std::vector<double>& singular_values, std::size_t from) {
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < singular_values.size(); ++i) {
        const double s2 = singular_values[i] * singular_values[i];
        total += s2;
        if (i >= from) tail += s2;
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace modlab
