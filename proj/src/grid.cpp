#include "modlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "modlab/expr.hpp"

namespace modlab {

Grid::Grid(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("grid bounds must be finite");
    if (!(x_min < x_max)) throw std::invalid_argument("grid requires x_min < x_max");
    if (n < 2) throw std::invalid_argument("grid requires at least 2 nodes, got " + std::to_string(n));
    if (n % 2 != 0)
        throw std::invalid_argument("grid node count must be even (centered frequency grid), got " +
                                    std::to_string(n));
    h_ = (x_max - x_min) / static_cast<double>(n);
    dlambda_ = 2.0 * std::numbers::pi / (static_cast<double>(n) * h_);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = node(j);
    return out;
}

std::vector<double> Grid::frequencies() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = frequency(k);
    return out;
}

Grid make_grid(double x_min, double x_max, std::size_t n) { return Grid(x_min, x_max, n); }

// ---------------------------------------------------------------------------

SampledFunction::SampledFunction(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("sample count " + std::to_string(values_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("sampled function values must be finite");
    }
}

SampledFunction::SampledFunction(Grid grid) : grid_(grid), values_(grid.size()) {}

SampledFunction SampledFunction::from_real(Grid grid, std::span<const double> values) {
    return SampledFunction(grid, std::vector<Complex>(values.begin(), values.end()));
}

double SampledFunction::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> SampledFunction::abs() const {
    std::vector<double> out(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j) out[j] = std::abs(values_[j]);
    return out;
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("operands live on different grids");
}

}  // namespace

SampledFunction operator+(const SampledFunction& a, const SampledFunction& b) {
    require_same_grid(a.grid_, b.grid_);
    std::vector<Complex> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.values_[j] + b.values_[j];
    return SampledFunction(a.grid_, std::move(v));
}

SampledFunction operator-(const SampledFunction& a, const SampledFunction& b) {
    require_same_grid(a.grid_, b.grid_);
    std::vector<Complex> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.values_[j] - b.values_[j];
    return SampledFunction(a.grid_, std::move(v));
}

SampledFunction operator*(Complex s, const SampledFunction& f) {
    std::vector<Complex> v(f.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * f.values_[j];
    return SampledFunction(f.grid_, std::move(v));
}

SpectralFunction::SpectralFunction(Grid grid, std::vector<Complex> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != grid_.size())
        throw std::invalid_argument("coefficient count does not match grid size");
}

// ---------------------------------------------------------------------------
// Transforms. The normative definition is the plain quadrature sum; FFTW
// evaluates it after factoring x_j lambda_k = x_min lambda_k + 2 pi j (k - n/2) / n.

namespace {

class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    // Plans are created on aligned scratch buffers; every execution also
    // uses fftw_malloc'd buffers so the same codelets run on every call.
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

private:
    FftPlans() = default;
    ~FftPlans() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

class AlignedBuffer {
public:
    explicit AlignedBuffer(std::size_t n) : data_(fftw_alloc_complex(n)), n_(n) {
        if (!data_) throw std::bad_alloc();
    }
    ~AlignedBuffer() { fftw_free(data_); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;

    fftw_complex* data() noexcept { return data_; }
    Complex get(std::size_t i) const noexcept { return {data_[i][0], data_[i][1]}; }
    void set(std::size_t i, Complex v) noexcept {
        data_[i][0] = v.real();
        data_[i][1] = v.imag();
    }
    std::size_t size() const noexcept { return n_; }

private:
    fftw_complex* data_;
    std::size_t n_;
};

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

SpectralFunction forward_fourier(const SampledFunction& f) {
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    AlignedBuffer in(n), out(n);
    for (std::size_t j = 0; j < n; ++j) in.set(j, (j % 2 == 0) ? f[j] : -f[j]);
    fftw_execute_dft(FftPlans::instance().get(n, FFTW_FORWARD), in.data(), out.data());
    std::vector<Complex> coeffs(n);
    const double h = g.spacing();
    for (std::size_t k = 0; k < n; ++k)
        coeffs[k] = h * unit_phase(-g.x_min() * g.frequency(k)) * out.get(k);
    return SpectralFunction(g, std::move(coeffs));
}

SampledFunction inverse_fourier(const SpectralFunction& F) {
    const Grid& g = F.grid();
    const std::size_t n = g.size();
    AlignedBuffer in(n), out(n);
    for (std::size_t k = 0; k < n; ++k) in.set(k, F[k] * unit_phase(g.x_min() * g.frequency(k)));
    fftw_execute_dft(FftPlans::instance().get(n, FFTW_BACKWARD), in.data(), out.data());
    const double scale = g.frequency_spacing() / (2.0 * std::numbers::pi);
    std::vector<Complex> values(n);
    for (std::size_t j = 0; j < n; ++j) values[j] = scale * ((j % 2 == 0) ? out.get(j) : -out.get(j));
    return SampledFunction(g, std::move(values));
}

SampledFunction sample_expression(std::string_view expr, const Grid& g) {
    const Expression e = Expression::parse(expr, {.allow_x = true, .allow_lambda = false, .primary = Variable::x});
    std::vector<Complex> values(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) values[j] = e(g.node(j));
    return SampledFunction(g, std::move(values));
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(std::ostream& out, const SampledFunction& f) {
    out << "x,re,im\n";
    char buf[96];
    for (std::size_t j = 0; j < f.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid().node(j), f[j].real(), f[j].imag());
        out << buf;
    }
}

SampledFunction read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,re,im") throw std::runtime_error("CSV header must be 'x,re,im', got '" + line + "'");

    std::vector<double> xs;
    std::vector<Complex> values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string a, b, c;
        if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c))
            throw std::runtime_error("CSV row " + std::to_string(row) + ": expected 3 fields");
        try {
            xs.push_back(std::stod(a));
            values.emplace_back(std::stod(b), std::stod(c));
        } catch (const std::exception&) {
            throw std::runtime_error("CSV row " + std::to_string(row) + ": malformed number");
        }
    }
    const std::size_t n = xs.size();
    if (n < 2) throw std::runtime_error("CSV needs at least 2 rows");
    const double h = (xs.back() - xs.front()) / static_cast<double>(n - 1);
    if (!(h > 0)) throw std::runtime_error("CSV abscissae must be increasing");
    for (std::size_t j = 0; j < n; ++j) {
        const double expect = xs.front() + static_cast<double>(j) * h;
        const double tol = 1e-9 * h + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(expect);
        if (std::abs(xs[j] - expect) > tol)
            throw std::runtime_error("CSV abscissae are not uniformly spaced at row " + std::to_string(j + 2));
    }
    Grid g(xs.front(), xs.front() + static_cast<double>(n) * h, n);
    return SampledFunction(g, std::move(values));
}

}  // namespace modlab
