#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "scalrig/error.hpp"
#include "scalrig/jet.hpp"

using namespace scalrig;

namespace {

// Sparse polynomial with exact symbolic differentiation, used as the oracle.
using Exps = std::vector<int>;
using Poly = std::map<Exps, double>;

Poly multiply(const Poly& a, const Poly& b)
{
    Poly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exps e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out[e] += ca * cb;
        }
    return out;
}

double partial_at(const Poly& p, const Exps& alpha, const std::vector<double>& x)
{
    double total = 0.0;
    for (const auto& [e, c] : p) {
        double term = c;
        for (std::size_t i = 0; i < e.size() && term != 0.0; ++i) {
            if (e[i] < alpha[i]) {
                term = 0.0;
                break;
            }
            for (int d = 0; d < alpha[i]; ++d) term *= e[i] - d;
            term *= std::pow(x[i], e[i] - alpha[i]);
        }
        total += term;
    }
    return total;
}

Jet jet_of(const Poly& p, const std::vector<Jet>& vars)
{
    Jet out = Jet::constant_like(vars.front(), 0.0);
    for (const auto& [e, c] : p) {
        Jet term = Jet::constant_like(vars.front(), c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) term = term * pow(vars[i], e[i]);
        out += term;
    }
    return out;
}

Poly random_poly(std::mt19937_64& rng, int nvars, int degree)
{
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, degree);
    Poly p;
    for (int t = 0; t < 6; ++t) {
        Exps e(static_cast<std::size_t>(nvars), 0);
        int left = pick(rng);
        for (int i = 0; i < nvars && left > 0; ++i) {
            std::uniform_int_distribution<int> take(0, left);
            e[i] = take(rng);
            left -= e[i];
        }
        p[e] += coef(rng);
    }
    return p;
}

}  // namespace

TEST_CASE("make_variables seeds values and unit gradients")
{
    auto v = make_variables(std::vector<double>{2.0}, 2);
    REQUIRE(v.size() == 1);
    CHECK(v[0].partial({0}) == 2.0);
    CHECK(v[0].partial({1}) == 1.0);
    CHECK(v[0].partial({2}) == 0.0);

    auto w = make_variables(std::vector<double>{0.5, -1.0}, 1);
    CHECK(w[1].partial({0, 1}) == 1.0);
    CHECK(w[1].partial({1, 0}) == 0.0);
    CHECK(w[1].value() == -1.0);

    auto c = make_variables(std::vector<double>{1.0}, 0);
    CHECK(c[0].coefficients().size() == 1);
    CHECK(c[0].value() == 1.0);

    CHECK_THROWS_AS(make_variables(std::vector<double>{}, 1), ValidationError);
    CHECK_THROWS_AS(make_variables(std::vector<double>(9, 0.0), 1), ValidationError);
    CHECK_THROWS_AS(make_variables(std::vector<double>{1.0}, 5), ValidationError);
}

TEST_CASE("ring operations")
{
    const Jet x = make_variables(std::vector<double>{3.0}, 2)[0];
    const Jet sq = x * x;
    CHECK(sq.partial({0}) == 9.0);
    CHECK(sq.partial({1}) == 6.0);
    CHECK(sq.partial({2}) == 2.0);

    const Jet a = 4.0 + make_variables(std::vector<double>{0.0}, 3)[0] * 2.0;
    const Jet one = a / a;
    CHECK(one.value() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < one.coefficients().size(); ++i) CHECK(one.coefficients()[i] == doctest::Approx(0.0));

    const Jet z = make_variables(std::vector<double>{0.0}, 2)[0];
    const Jet d = (z + 1.0) * (z - 1.0);
    CHECK(d.partial({0}) == -1.0);
    CHECK(d.partial({1}) == 0.0);
    CHECK(d.partial({2}) == 2.0);

    CHECK_THROWS_AS(a / (a - 4.0), DomainError);
    const Jet other = make_variables(std::vector<double>{0.0, 0.0}, 2)[0];
    CHECK_THROWS_AS(a + other, ValidationError);
}

TEST_CASE("division inverts multiplication up to truncation")
{
    auto v = make_variables(std::vector<double>{0.3, -0.7}, 4);
    const Jet a = sin(v[0]) + v[1] * v[1];
    const Jet b = 2.0 + cos(v[0] * v[1]);
    const Jet back = (a / b) * b;
    for (std::size_t i = 0; i < a.coefficients().size(); ++i)
        CHECK(back.coefficients()[i] == doctest::Approx(a.coefficients()[i]).epsilon(1e-12));
}

TEST_CASE("analytic functions")
{
    const Jet x4 = make_variables(std::vector<double>{4.0}, 1)[0];
    const Jet r = sqrt(x4);
    CHECK(r.value() == doctest::Approx(2.0));
    CHECK(r.partial({1}) == doctest::Approx(0.25));

    const Jet x0 = make_variables(std::vector<double>{0.0}, 3)[0];
    CHECK(sin(x0).partial({3}) == doctest::Approx(-1.0));

    for (double at : {-1.3, 0.0, 0.7}) {
        const Jet x = make_variables(std::vector<double>{at}, 4)[0];
        const Jet e = exp(x) * exp(-x);
        CHECK(e.value() == doctest::Approx(1.0));
        for (std::size_t i = 1; i < e.coefficients().size(); ++i)
            CHECK(std::abs(e.coefficients()[i]) < 1e-12);
    }

    const Jet neg = make_variables(std::vector<double>{-1.0}, 2)[0];
    CHECK_THROWS_AS(sqrt(neg), DomainError);
    CHECK_THROWS_AS(log(neg), DomainError);
    CHECK_THROWS_AS(sqrt(neg * 0.0), DomainError);
}

TEST_CASE("integer powers, including negative exponents")
{
    const Jet x = make_variables(std::vector<double>{2.0}, 3)[0];
    const Jet p = pow(x, -2);
    CHECK(p.value() == doctest::Approx(0.25));
    CHECK(p.partial({1}) == doctest::Approx(-2.0 / 8.0));
    CHECK(p.partial({2}) == doctest::Approx(6.0 / 16.0));
    CHECK(p.partial({3}) == doctest::Approx(-24.0 / 32.0));
    CHECK(pow(x, 0).value() == 1.0);
}

TEST_CASE("extract_partial")
{
    auto v = make_variables(std::vector<double>{1.0, 1.0}, 3);
    const Jet f = v[0] * v[0] * v[1];
    CHECK(f.partial({2, 0}) == doctest::Approx(2.0));
    CHECK(f.partial({0, 0}) == doctest::Approx(1.0));

    auto w = make_variables(std::vector<double>{-0.4, 2.5}, 2);
    CHECK((w[0] * w[1]).partial({1, 1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS((w[0] * w[1]).partial({2, 1}), ValidationError);
}

TEST_CASE("product of random polynomials matches symbolic partials")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int nvars = 1 + trial % 4;
        const Poly p = random_poly(rng, nvars, 4);
        const Poly q = random_poly(rng, nvars, 4);
        std::vector<double> x(static_cast<std::size_t>(nvars));
        for (auto& xi : x) xi = coord(rng);

        const auto vars = make_variables(x, 4);
        const Jet prod = jet_of(p, vars) * jet_of(q, vars);
        const Poly pq = multiply(p, q);
        const auto& layout = prod.layout();
        for (std::size_t i = 0; i < layout.size(); ++i) {
            Exps alpha(static_cast<std::size_t>(nvars));
            for (int k = 0; k < nvars; ++k) alpha[k] = layout.exponent(i)[k];
            const double expected = partial_at(pq, alpha, x);
            CHECK(std::abs(prod.coefficients()[i] - expected) <= 1e-12 * (1.0 + std::abs(expected)));
        }
    }
}

TEST_CASE("chain rule agrees with central differences")
{
    // f(g(x)) with g(x) = 1.5 + x - 0.3 x^2; fourth-order-accurate stencils.
    auto g = [](double x) { return 1.5 + x - 0.3 * x * x; };
    const double at = 0.4;
    const double h = 1e-3;
    const Jet x = make_variables(std::vector<double>{at}, 2)[0];
    const Jet gj = 1.5 + x - 0.3 * x * x;

    struct Case {
        Jet jet;
        double (*f)(double);
    };
    const Case cases[] = {
        {sin(gj), [](double y) { return std::sin(y); }},
        {exp(gj), [](double y) { return std::exp(y); }},
        {sqrt(gj), [](double y) { return std::sqrt(y); }},
    };
    for (const auto& c : cases) {
        auto fg = [&](double t) { return c.f(g(t)); };
        const double d1 = (-fg(at + 2 * h) + 8 * fg(at + h) - 8 * fg(at - h) + fg(at - 2 * h)) / (12 * h);
        const double d2 =
            (-fg(at + 2 * h) + 16 * fg(at + h) - 30 * fg(at) + 16 * fg(at - h) - fg(at - 2 * h)) / (12 * h * h);
        CHECK(c.jet.partial({1}) == doctest::Approx(d1).epsilon(1e-8));
        CHECK(c.jet.partial({2}) == doctest::Approx(d2).epsilon(1e-5));
    }
}

TEST_CASE("truncation consistency")
{
    const std::vector<double> pt{0.2, -0.5, 0.9};
    auto f = [](const std::vector<Jet>& v) { return tanh(v[0] * v[1]) + log(2.0 + v[2] * v[2]) / cosh(v[1]); };
    const Jet high = f(make_variables(pt, 4)).truncated(2);
    const Jet low = f(make_variables(pt, 2));
    REQUIRE(high.coefficients().size() == low.coefficients().size());
    for (std::size_t i = 0; i < low.coefficients().size(); ++i)
        CHECK(high.coefficients()[i] == doctest::Approx(low.coefficients()[i]).epsilon(1e-13));
}

TEST_CASE("derivative lowers order and shifts coefficients")
{
    auto v = make_variables(std::vector<double>{0.5, 2.0}, 3);
    const Jet f = v[0] * v[0] * v[0] * v[1];
    const Jet d = f.derivative(0);
    CHECK(d.order() == 2);
    CHECK(d.value() == doctest::Approx(3 * 0.25 * 2.0));
    CHECK(d.partial({1, 0}) == doctest::Approx(6 * 0.5 * 2.0));
    CHECK(d.partial({1, 1}) == doctest::Approx(6 * 0.5));
    CHECK(f.hessian(0, 1) == doctest::Approx(3 * 0.25));
}
