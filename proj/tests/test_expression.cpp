#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "scalrig/error.hpp"
#include "scalrig/expression.hpp"

using namespace scalrig;

namespace {

double eval(const std::string& src, std::vector<double> x)
{
    const Expression e = parse_expression(src, static_cast<int>(x.size()));
    return e.evaluate<double>(std::span<const double>(x));
}

std::string error_of(const std::string& src, int dims)
{
    try {
        parse_expression(src, dims);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("stereographic conformal factor parses with depth 5")
{
    const Expression e = parse_expression("4/(1+x1^2+x2^2)^2", 2);
    CHECK(e.depth() == 5);
    CHECK(e.max_variable() == 2);
    const std::vector<double> x{0.5, -0.5};
    CHECK(e.evaluate<double>(std::span<const double>(x)) == doctest::Approx(4.0 / (1.5 * 1.5)));
}

TEST_CASE("syntax errors carry 1-based offsets")
{
    const std::string unbalanced = error_of("sin(x1", 3);
    CHECK(unbalanced.find("unbalanced parenthesis") != std::string::npos);
    CHECK(unbalanced.find("offset 7") != std::string::npos);

    const std::string range = error_of("x9", 3);
    CHECK(range.find("out of range") != std::string::npos);
    CHECK(range.find("offset 1") != std::string::npos);

    CHECK(error_of("foo(x1)", 2).find("unknown identifier") != std::string::npos);
    CHECK(error_of("x1^1.5", 2).find("non-integer exponent") != std::string::npos);
    CHECK(error_of("x1^x2", 2).find("integer") != std::string::npos);
    CHECK(error_of("x1 + ", 2).find("unexpected end") != std::string::npos);
    CHECK(error_of("x1 $ 2", 2).find("offset 4") != std::string::npos);
    CHECK(error_of("(x1))", 2).find("unexpected ')'") != std::string::npos);
    CHECK(error_of("x0", 2).find("out of range") != std::string::npos);
}

TEST_CASE("precedence and associativity")
{
    CHECK(eval("-x1^2", {3.0}) == doctest::Approx(-9.0));
    CHECK(eval("2^-1", {0.0}) == doctest::Approx(0.5));
    CHECK(eval("8/4/2", {0.0}) == doctest::Approx(1.0));
    CHECK(eval("10-4-3", {0.0}) == doctest::Approx(3.0));
    CHECK(eval("1+2*3", {0.0}) == doctest::Approx(7.0));
    CHECK(eval("--x1", {2.0}) == doctest::Approx(2.0));
    CHECK(eval("(x1+x2)^3", {1.0, 1.0}) == doctest::Approx(8.0));
    CHECK(eval("2.5e-1*x1", {4.0}) == doctest::Approx(1.0));
    CHECK(eval("exp(log(x1)) + sqrt(x2) - cosh(0) + sinh(0) + tanh(0)", {3.0, 16.0}) == doctest::Approx(6.0));
    CHECK(eval("sin(x1)^2+cos(x1)^2", {0.3}) == doctest::Approx(1.0));
}

TEST_CASE("evaluation domain errors")
{
    CHECK_THROWS_AS(eval("sqrt(x1)", {-1.0}), DomainError);
    CHECK_THROWS_AS(eval("log(x1)", {0.0}), DomainError);
    CHECK_THROWS_AS(eval("1/x1", {0.0}), DomainError);
}

TEST_CASE("jet evaluation matches double evaluation and derivatives")
{
    const Expression e = parse_expression("exp(2*x1)*(1+x2^2)", 2);
    const std::vector<double> pt{0.1, 0.4};
    const auto vars = make_variables(pt, 2);
    const Jet j = e.evaluate<Jet>(std::span<const Jet>(vars));
    CHECK(j.value() == doctest::Approx(e.evaluate<double>(std::span<const double>(pt))));
    CHECK(j.partial({1, 0}) == doctest::Approx(2 * std::exp(0.2) * 1.16));
    CHECK(j.partial({1, 1}) == doctest::Approx(2 * std::exp(0.2) * 0.8));
    CHECK(j.partial({0, 2}) == doctest::Approx(2 * std::exp(0.2)));
}

TEST_CASE("constants")
{
    CHECK(Expression().is_zero_constant());
    CHECK(Expression::constant(0.0).is_zero_constant());
    CHECK(!parse_expression("0*x1", 1).is_zero_constant());
    CHECK(parse_expression("0", 1).is_zero_constant());
    const std::vector<double> x{1.0};
    CHECK(Expression::constant(2.5).evaluate<double>(std::span<const double>(x)) == 2.5);
}
