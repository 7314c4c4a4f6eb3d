#include <gtest/gtest.h>

#include "annulus_lab/expr.hpp"
#include "annulus_lab/profile.hpp"
#include "oracles.hpp"

using namespace annulus_lab;

TEST(ParseProfile, SimpleProfiles) {
    EXPECT_DOUBLE_EQ(parse_profile("r")(2.0), 2.0);
    EXPECT_DOUBLE_EQ(parse_profile("1/r^2")(2.0), 0.25);
    EXPECT_NEAR(parse_profile("sqrt(r) + ln(r) * exp(-r)")(3.0), std::sqrt(3.0) + std::log(3.0) * std::exp(-3.0), 1e-15);
}

TEST(ParseProfile, UnbalancedParenthesisReportsPosition) {
    try {
        parse_profile("r*(");
        FAIL() << "expected a syntax error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 3u);
        EXPECT_FALSE(e.expected().empty());
    }
}

TEST(ParseProfile, RejectsUnknownNames) {
    EXPECT_THROW(parse_profile("foo(r)"), ParseError);
    EXPECT_THROW(parse_profile("x + 1"), ParseError);
    EXPECT_THROW(parse_profile("2 r"), ParseError);
}

TEST(Expression, PrecedenceAndAssociativity) {
    auto e = [](const char* s) { return Expression::parse(s)(2.0); };
    EXPECT_DOUBLE_EQ(e("2^3^2"), 512.0);
    EXPECT_DOUBLE_EQ(e("-r^2"), -4.0);
    EXPECT_DOUBLE_EQ(e("8/r/2"), 2.0);
    EXPECT_DOUBLE_EQ(e("1 - r - 1"), -2.0);
    EXPECT_DOUBLE_EQ(e("1 + r * 3"), 7.0);
    EXPECT_DOUBLE_EQ(e("(1 + r) * 3"), 9.0);
    EXPECT_NEAR(e("pi * e"), kPi * std::numbers::e, 1e-15);
}

TEST(Expression, TwoVariables) {
    auto e = Expression::parse("r * cos(theta)", {"r", "theta"});
    EXPECT_NEAR(e({2.0, kPi / 3}), 1.0, 1e-15);
    EXPECT_TRUE(e.uses_variable(1));
}

TEST(Expression, EvaluationErrors) {
    EXPECT_THROW(Expression::parse("ln(r)")(-1.0), EvalError);
    EXPECT_THROW(Expression::parse("1/r")(0.0), EvalError);
    EXPECT_THROW(Expression::parse("sqrt(r)")(-4.0), EvalError);
}

TEST(Expression, PrintRoundTrips) {
    const char* texts[] = {"r", "1/r^2", "-r^2 + 3*r - 1/(1 + r)", "sin(r)^2 + cos(r)^2", "exp(-r/2) * sqrt(abs(r - 3))",
                           "2^r^0.5", "ln(1 + r) - tan(r/10)", "-(-r)"};
    oracle::Rng rng(21);
    for (const char* t : texts) {
        auto e = Expression::parse(t);
        auto back = Expression::parse(e.print());
        for (int k = 0; k < 100; ++k) {
            double r = rng.uniform(0.1, 5.0);
            double a = e(r), b = back(r);
            EXPECT_LE(std::abs(a - b), 1e-14 * std::max(1.0, std::abs(a))) << t << " -> " << e.print();
        }
    }
}

TEST(RadialProfile, SignReport) {
    auto p = parse_profile("r - 1");
    EXPECT_EQ(p.sign_report(1.5, 2.0).sign, 1);
    EXPECT_EQ(p.sign_report(0.5, 2.0).sign, 0);
    EXPECT_EQ(p.sign_report(1.0, 2.0).sign, 0);  // touches zero at r = 1
    EXPECT_EQ(parse_profile("-1/r").sign_report(1, 2).sign, -1);
}

TEST(RadialProfile, DerivativeFallbackIsAccurate) {
    auto p = parse_profile("r^3");
    EXPECT_NEAR(p.derivative(2.0), 12.0, 1e-9);
}
