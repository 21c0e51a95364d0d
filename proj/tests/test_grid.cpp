#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "modlab/grid.hpp"

using namespace modlab;

namespace {

SampledFunction random_function(const Grid& g, unsigned seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> d;
    std::vector<Complex> v(g.size());
    for (auto& z : v) z = {d(eng), d(eng)};
    return SampledFunction(g, v);
}

// The plain quadrature sum, no fast transform.
std::vector<Complex> direct_dft(const SampledFunction& f) {
    const Grid& g = f.grid();
    std::vector<Complex> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < g.size(); ++j) acc += f[j] * std::polar(1.0, -g.node(j) * g.frequency(k));
        out[k] = g.spacing() * acc;
    }
    return out;
}

}  // namespace

TEST(Grid, NodesAndFrequencies) {
    const Grid g = make_grid(-std::numbers::pi, std::numbers::pi, 4);
    EXPECT_DOUBLE_EQ(g.spacing(), std::numbers::pi / 2);
    const double nodes[] = {-std::numbers::pi, -std::numbers::pi / 2, 0.0, std::numbers::pi / 2};
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(g.node(j), nodes[j], 1e-15);
    EXPECT_NEAR(g.frequency_spacing(), 1.0, 1e-15);
    const double freqs[] = {-2, -1, 0, 1};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(g.frequency(k), freqs[k], 1e-15);
}

TEST(Grid, RejectsBadShapes) {
    EXPECT_THROW(make_grid(0, 1, 3), std::invalid_argument);
    EXPECT_THROW(make_grid(0, 1, 0), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 0, 4), std::invalid_argument);
    EXPECT_THROW(make_grid(0, INFINITY, 4), std::invalid_argument);
}

TEST(Fourier, MatchesDirectSum) {
    const Grid g(-3.0, 5.0, 64);
    const auto f = random_function(g, 1);
    const auto F = forward_fourier(f);
    const auto D = direct_dft(f);
    double top = 0;
    for (auto z : D) top = std::max(top, std::abs(z));
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_LE(std::abs(F[k] - D[k]), 1e-12 * top);
}

TEST(Fourier, ZeroMapsToZero) {
    const Grid g(-1, 1, 16);
    const auto F = forward_fourier(SampledFunction(g));
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(F[k], Complex{});
    const auto f = inverse_fourier(SpectralFunction(g, std::vector<Complex>(16)));
    EXPECT_EQ(f.max_abs(), 0.0);
}

TEST(Fourier, IndicatorOfInterval) {
    const Grid g(-4.0, 4.0, 512);
    const auto f = sample_expression("chi(-1,1)", g);
    const auto F = forward_fourier(f);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double l = g.frequency(k);
        const double exact = l == 0.0 ? 2.0 : 2.0 * std::sin(l) / l;
        EXPECT_LE(std::abs(F[k] - exact), 5 * g.spacing()) << "lambda = " << l;
    }
}

TEST(Fourier, Gaussian) {
    const Grid g(-16.0, 16.0, 1024);
    const auto F = forward_fourier(sample_expression("exp(-x^2/2)", g));
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double l = g.frequency(k);
        if (std::abs(l) > 8) continue;
        const double exact = std::sqrt(2 * std::numbers::pi) * std::exp(-l * l / 2);
        EXPECT_LE(std::abs(F[k] - exact), 1e-6 * exact + 1e-14);
    }
}

TEST(Fourier, RoundTrip) {
    for (std::size_t n : {64u, 256u, 1024u}) {
        const Grid g(-2.0, 7.0, n);
        const auto f = random_function(g, static_cast<unsigned>(n));
        const auto back = inverse_fourier(forward_fourier(f));
        EXPECT_LE((back - f).max_abs(), 1e-12 * f.max_abs());
        const SpectralFunction F(g, std::vector<Complex>(f.values().begin(), f.values().end()));
        const auto again = forward_fourier(inverse_fourier(F));
        for (std::size_t k = 0; k < n; ++k) EXPECT_LE(std::abs(again[k] - F[k]), 1e-12 * f.max_abs());
    }
}

TEST(Fourier, SingleFrequency) {
    const Grid g(-1.5, 2.5, 32);
    const std::size_t k0 = 19;
    std::vector<Complex> c(g.size());
    c[k0] = 2 * std::numbers::pi / g.frequency_spacing();
    const auto f = inverse_fourier(SpectralFunction(g, c));
    for (std::size_t j = 0; j < g.size(); ++j)
        EXPECT_LE(std::abs(f[j] - std::polar(1.0, g.node(j) * g.frequency(k0))), 1e-13);
}

TEST(Fourier, ParsevalAndLinearity) {
    const Grid g(-5, 5, 256);
    const auto f = random_function(g, 3), u = random_function(g, 4);
    const auto F = forward_fourier(f);
    double lhs = 0, rhs = 0;
    for (std::size_t j = 0; j < g.size(); ++j) lhs += g.spacing() * std::norm(f[j]);
    for (std::size_t k = 0; k < g.size(); ++k) rhs += g.frequency_spacing() / (2 * std::numbers::pi) * std::norm(F[k]);
    EXPECT_NEAR(lhs, rhs, 1e-10 * lhs);

    const Complex a{1.5, -0.5}, b{-2.0, 0.25};
    const auto lin = forward_fourier(a * f + b * u);
    const auto Fu = forward_fourier(u);
    double top = 0;
    for (std::size_t k = 0; k < g.size(); ++k) top = std::max(top, std::abs(lin[k]));
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_LE(std::abs(lin[k] - (a * F[k] + b * Fu[k])), 1e-12 * top);
}

TEST(SampleExpression, Basics) {
    const Grid g(-4, 4, 8);
    EXPECT_EQ(sample_expression("0", g).max_abs(), 0.0);
    const auto f = sample_expression("exp(-x^2/2)", g);
    EXPECT_DOUBLE_EQ(f[4].real(), 1.0);
    const auto c = sample_expression("chi(-1,1)", g);
    EXPECT_EQ(c[6].real(), 0.0);  // x = 2
    EXPECT_EQ(c[4].real(), 1.0);  // x = 0
    EXPECT_ANY_THROW(sample_expression("1/x", g));
    EXPECT_ANY_THROW(sample_expression("exp(", g));
}

TEST(Csv, RoundTrip) {
    const Grid g(-0.3, 1.7, 40);
    const auto f = random_function(g, 9);
    std::stringstream s;
    write_csv(s, f);
    const auto back = read_csv(s);
    EXPECT_EQ(back.size(), f.size());
    EXPECT_NEAR(back.grid().x_min(), g.x_min(), 1e-12);
    EXPECT_NEAR(back.grid().spacing(), g.spacing(), 1e-12);
    EXPECT_LE((SampledFunction(g, {back.values().begin(), back.values().end()}) - f).max_abs(), 1e-12);
}

TEST(Csv, RejectsNonUniformSpacing) {
    std::stringstream s("x,re,im\n0,1,0\n1,1,0\n2.5,1,0\n3,1,0\n");
    EXPECT_ANY_THROW(read_csv(s));
    std::stringstream bad("a,b,c\n0,1,0\n");
    EXPECT_ANY_THROW(read_csv(bad));
}
