#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "modlab/expr.hpp"

using namespace modlab;

TEST(Expression, Arithmetic) {
    EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3")(0), 7.0);
    EXPECT_DOUBLE_EQ(Expression::parse("(1 + 2) * 3")(0), 9.0);
    EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0), 512.0);
    EXPECT_DOUBLE_EQ(Expression::parse("-2^2")(0), -4.0);
    EXPECT_DOUBLE_EQ(Expression::parse("2^-1")(0), 0.5);
    EXPECT_DOUBLE_EQ(Expression::parse("8 / 4 / 2")(0), 1.0);
    EXPECT_DOUBLE_EQ(Expression::parse("1e-3 * 1000")(0), 1.0);
}

TEST(Expression, FunctionsAndConstants) {
    EXPECT_NEAR(Expression::parse("sin(pi / 2) + cos(0)")(0), 2.0, 1e-15);
    EXPECT_NEAR(Expression::parse("log(e)")(0), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(Expression::parse("sqrt(abs(-16))")(0), 4.0);
    EXPECT_DOUBLE_EQ(Expression::parse("exp(-x^2)")(0.0), 1.0);
}

TEST(Expression, Variables) {
    const auto e = Expression::parse("x * l");
    EXPECT_DOUBLE_EQ(e(2.0, 3.0), 6.0);
    EXPECT_TRUE(e.uses(Variable::x));
    EXPECT_TRUE(e.uses(Variable::lambda));
    EXPECT_TRUE(Expression::parse("3 + pi").is_constant());
    EXPECT_THROW(Expression::parse("l", {.allow_x = true, .allow_lambda = false, .primary = Variable::x}), ParseError);
}

TEST(Expression, ChiIsClosedInPrimaryVariable) {
    const auto cx = Expression::parse("chi(-1, 1)");
    EXPECT_EQ(cx(-1.0), 1.0);
    EXPECT_EQ(cx(1.0), 1.0);
    EXPECT_EQ(cx(1.0000001), 0.0);
    const auto cl = Expression::parse("chi(0, 2)", {.allow_x = true, .allow_lambda = true, .primary = Variable::lambda});
    EXPECT_EQ(cl(100.0, 1.0), 1.0);
    EXPECT_EQ(cl(1.0, 3.0), 0.0);
    EXPECT_TRUE(cl.uses(Variable::lambda));
    EXPECT_EQ(Expression::parse("chi(0, 1, x - 5)")(5.5), 1.0);
}

TEST(Expression, ErrorsCarryPosition) {
    try {
        Expression::parse("1 +\n  * 2");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 3u);
    }
    EXPECT_THROW(Expression::parse("foo(1)"), ParseError);
    EXPECT_THROW(Expression::parse("sin(1, 2)"), ParseError);
    EXPECT_THROW(Expression::parse("(1 + 2"), ParseError);
    EXPECT_THROW(Expression::parse("1 $ 2"), ParseError);
    EXPECT_THROW(Expression::parse("1 2"), ParseError);
}

TEST(Expression, NonFiniteEvaluationThrows) {
    EXPECT_THROW(Expression::parse("1 / x")(0.0), EvalError);
    EXPECT_THROW(Expression::parse("log(x)")(-1.0), EvalError);
}

TEST(Expression, PrintRoundTrip) {
    for (const char* text : {"exp(-x^2 / 2) * cos(3 * x)", "1 / (1 + (l - x)^2)", "-(x - 1)^2", "2^3^2",
                             "(2^3)^2", "x - (1 - x)", "chi(-1, 2) + 0.1", "abs(l) * -3"}) {
        const auto e = Expression::parse(text);
        const auto again = Expression::parse(e.to_string());
        EXPECT_EQ(again.to_string(), e.to_string()) << text;
        for (double x : {-1.5, 0.0, 0.7})
            for (double l : {-2.0, 0.5}) EXPECT_DOUBLE_EQ(again(x, l), e(x, l)) << text;
    }
}

TEST(Expression, PrintsMinimalParentheses) {
    const std::pair<const char*, const char*> cases[] = {
        {"exp(-x^2)", "exp(-x^2)"},
        {"((1 + x)) * 2", "(1 + x) * 2"},
        {"1 - (2 - x)", "1 - (2 - x)"},
        {"(1 - 2) - x", "1 - 2 - x"},
        {"2 ^ (3 ^ 2)", "2^3^2"},
        {"(-2)^2", "(-2)^2"},
        {"x / (2 * l)", "x / (2 * l)"},
        {"chi(-1, 2)", "chi(-1, 2)"},
    };
    for (auto [in, out] : cases) EXPECT_EQ(Expression::parse(in).to_string(), out);
    EXPECT_EQ(Expression::constant(-4).to_string(), "-4");
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
