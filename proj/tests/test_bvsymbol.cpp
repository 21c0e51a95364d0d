#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "modlab/bvsymbol.hpp"

using namespace modlab;

namespace {

BVFunction lam(std::string_view text) { return Symbol::parse(text).section(0.0); }

}  // namespace

TEST(Variation, IndicatorOfHalfOpenInterval) {
    const auto g = lam("lambda on (-inf, 0]: 0; on (0, 1]: 1; on (1, inf): 0");
    EXPECT_NEAR(total_variation(g), 2.0, 1e-12);
    EXPECT_NEAR(v_norm(g), 3.0, 1e-12);
    EXPECT_EQ(g(0.0), 0.0);
    EXPECT_EQ(g(1.0), 1.0);
    EXPECT_EQ(g.right_limit(1.0), 0.0);
    EXPECT_EQ(g.right_limit(0.0), 1.0);
    EXPECT_NEAR(total_variation(g, 0.5, 2.0), 1.0, 1e-12);
    // The jump at 0 is felt from [0, d] since the value at 0 belongs to the left piece.
    EXPECT_NEAR(total_variation(g, 0.0, 0.5), 1.0, 1e-12);
}

TEST(Variation, Sine) {
    const BVFunction g(Expression::parse("sin(l)"));
    EXPECT_NEAR(total_variation(g, 0.0, 2 * std::numbers::pi), 4.0, 1e-6);
    EXPECT_NEAR(total_variation(g, 0.0, std::numbers::pi / 2), 1.0, 1e-9);
    EXPECT_NEAR(total_variation(g, 0.3, 0.3), 0.0, 0.0);
}

TEST(Variation, TwoSidedExponential) {
    const auto g = lam("lambda on (-inf, 0]: exp(l); on (0, inf): exp(-l)");
    EXPECT_NEAR(total_variation(g), 2.0, 1e-6);
    EXPECT_NEAR(sup_norm(g), 1.0, 1e-12);
    EXPECT_NEAR(v_norm(g), 3.0, 1e-6);
    const BVFunction h(Expression::parse("exp(-abs(l))"));
    EXPECT_NEAR(v_norm(h), 3.0, 1e-6);
    EXPECT_NEAR(total_variation(g, 5.0, kInf), std::exp(-5.0), 1e-9);
}

TEST(Variation, ConstantsAndPolynomialGrowth) {
    EXPECT_EQ(total_variation(lam("lambda: 4")), 0.0);
    EXPECT_NEAR(v_norm(lam("lambda: -4")), 4.0, 0.0);
    EXPECT_THROW(total_variation(lam("lambda: l")), NotBVCertifiable);
    EXPECT_THROW(total_variation(BVFunction(Expression::parse("sin(l)"))), NotBVCertifiable);
}

TEST(Variation, AlgebraInequalities) {
    const auto f = lam("lambda on (-inf, -1]: 0; on (-1, 2]: cos(l); on (2, inf): exp(2 - l)");
    const auto g = lam("lambda: 1 / (1 + l^2)");
    const auto sum = lam("lambda on (-inf, -1]: 1 / (1 + l^2); on (-1, 2]: cos(l) + 1 / (1 + l^2); "
                         "on (2, inf): exp(2 - l) + 1 / (1 + l^2)");
    const auto prod = lam("lambda on (-inf, -1]: 0; on (-1, 2]: cos(l) / (1 + l^2); on (2, inf): exp(2 - l) / (1 + l^2)");
    EXPECT_LE(total_variation(sum), total_variation(f) + total_variation(g) + 1e-9);
    EXPECT_LE(v_norm(prod), v_norm(f) * v_norm(g) + 1e-9);
    EXPECT_LE(sup_norm(f), v_norm(f));
}

TEST(SymbolDsl, RoundTrip) {
    const char* texts[] = {
        "lambda: 1",
        "x: exp(-x^2); lambda on (-inf, 0]: exp(l); on (0, inf): exp(-l)",
        "lambda on (-inf, -2]: 0; on (-2, 3]: 1; on (3, inf): 0",
        "x: 1 + chi(-1, 2); lambda on (-inf, 0]: -1 on (0, inf): 1",
        "lambda: 1 / (1 + (l - x)^2)",
    };
    for (const char* t : texts) {
        const auto a = Symbol::parse(t);
        const auto printed = a.to_string();
        EXPECT_EQ(Symbol::parse(printed).to_string(), printed) << t;
        const auto b = Symbol::parse(printed);
        for (double x : {-1.5, 0.0, 2.0})
            for (double l : {-3.0, -2.0, 0.0, 0.5, 3.0, 10.0}) EXPECT_EQ(a(x, l), b(x, l)) << t;
    }
}

TEST(SymbolDsl, Errors) {
    EXPECT_THROW(Symbol::parse("lambda on (0, -1]: 1"), SemanticError);
    EXPECT_THROW(Symbol::parse("lambda on (-inf, 0]: 1; on (1, inf): 0"), SemanticError);
    EXPECT_THROW(Symbol::parse("lambda on (-inf, 0): 1; on (0, inf): 0"), SemanticError);
    EXPECT_THROW(Symbol::parse("lambda on (-inf, 0]: 1"), SemanticError);
    EXPECT_THROW(Symbol::parse("lambda on (-inf, 0]: 1; on (0, inf): 0; on (1, inf): 0"), SemanticError);
    EXPECT_THROW(Symbol::parse("lambda: "), ParseError);
    EXPECT_THROW(Symbol::parse("mu: 1"), ParseError);
    EXPECT_THROW(Symbol::parse("x: l; lambda: 1"), ParseError);
    try {
        Symbol::parse("lambda on (-inf, 0]: 1;\n on (0, inf): exp(");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(SymbolDsl, LeftContinuityAndFactor) {
    const auto a = Symbol::parse("x: 1 + chi(-1, 2); lambda on (-inf, 0]: -1; on (0, inf): 1");
    EXPECT_EQ(a(0.0, 0.0), -2.0);
    EXPECT_EQ(a(0.0, 1e-300), 2.0);
    EXPECT_EQ(a(3.0, 5.0), 1.0);
    EXPECT_EQ(a(2.0, 5.0), 2.0);
    EXPECT_FALSE(a.pieces_depend_on_x());
    EXPECT_TRUE(Symbol::parse("lambda: 1 / (1 + (l - x)^2)").pieces_depend_on_x());
}

TEST(SymbolNorms, SectionNorms) {
    const std::vector<double> probes{-2.0, 0.0, 0.5, 3.0};
    EXPECT_NEAR(linf_v_norm(Symbol::constant(1.0), probes), 1.0, 0.0);
    const auto sign = Symbol::parse("x: 1 + chi(-1, 2); lambda on (-inf, 0]: -1; on (0, inf): 1");
    const auto n = section_v_norms(sign, probes);
    EXPECT_NEAR(n[0], 3.0, 1e-12);
    EXPECT_NEAR(n[1], 6.0, 1e-12);
    EXPECT_NEAR(n[3], 3.0, 1e-12);
    EXPECT_NEAR(linf_v_norm(sign, probes), 6.0, 1e-12);
    const auto gauss = Symbol::parse("x: exp(-x^2); lambda on (-inf, 0]: exp(l); on (0, inf): exp(-l)");
    EXPECT_NEAR(section_v_norms(gauss, probes)[2], 3.0 * std::exp(-0.25), 1e-6);
    // Lorentzian centred at x: sup 1, variation 2, for every x.
    for (double v : section_v_norms(Symbol::parse("lambda: 1 / (1 + (l - x)^2)"), probes)) EXPECT_NEAR(v, 3.0, 1e-6);
}

TEST(Compactness, GaussianTimesExponentialPasses) {
    const auto a = Symbol::parse("x: exp(-x^2); lambda on (-inf, 0]: exp(l); on (0, inf): exp(-l)");
    const std::vector<double> ns{1, 2, 4, 8}, ls{1, 2, 4, 8, 16, 32};
    const auto r = compactness_report(a, ns, ls);
    EXPECT_TRUE(r.vanishing_at_infinity.pass) << r.vanishing_at_infinity.evidence;
    EXPECT_TRUE(r.variation_decay_in_x.pass) << r.variation_decay_in_x.evidence;
    EXPECT_TRUE(r.uniform_tail_variation.pass) << r.uniform_tail_variation.evidence;
    EXPECT_TRUE(r.all_pass());
    ASSERT_EQ(r.uniform_tail_variation.table.size(), ns.size());
    // Tail variation sup over |x| <= N is attained at x = 0: 2 e^{-L}.
    EXPECT_NEAR(r.uniform_tail_variation.table[0][0], 2 * std::exp(-1.0), 1e-6);
}

TEST(Compactness, ConstantFailsVanishing) {
    const std::vector<double> ns{1, 2, 4}, ls{1, 4, 16};
    const auto r = compactness_report(Symbol::constant(1.0), ns, ls);
    EXPECT_FALSE(r.vanishing_at_infinity.pass);
    EXPECT_FALSE(r.all_pass());
}

TEST(Compactness, XIndependentFailsDecay) {
    const std::vector<double> ns{1, 2, 4}, ls{1, 4, 16, 32};
    const auto r = compactness_report(Symbol::parse("lambda: exp(-abs(l))"), ns, ls);
    EXPECT_TRUE(r.vanishing_at_infinity.pass);
    EXPECT_FALSE(r.variation_decay_in_x.pass);
    EXPECT_TRUE(r.uniform_tail_variation.pass);
}
