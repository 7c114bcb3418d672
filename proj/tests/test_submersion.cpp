#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "scalrig/catalog.hpp"
#include "scalrig/error.hpp"
#include "scalrig/listing.hpp"
#include "scalrig/oracle.hpp"
#include "scalrig/submersion.hpp"

using namespace scalrig;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// |Ric°|^2 straight from the two eigenvalues and their multiplicities.
double traceless_from_eigs(const CanonicalVariationModel& m, const VariationCurvature& c)
{
    const double mean = c.scalar / m.dimension();
    return m.dim_f * (c.lambda_v - mean) * (c.lambda_v - mean) + m.dim_b * (c.lambda_h - mean) * (c.lambda_h - mean);
}

}  // namespace

TEST_CASE("Hopf and CP golden values")
{
    const auto h1 = variation_curvature(hopf_variation(1, 1.0));
    CHECK(std::abs(h1.lambda_v - 6.0) < 1e-12);
    CHECK(std::abs(h1.lambda_h - 6.0) < 1e-12);
    CHECK(std::abs(h1.scalar - 42.0) < 1e-12);
    CHECK(std::abs(h1.traceless_norm_sq) < 1e-12);

    const auto h2 = variation_curvature(hopf_variation(1, 2.0));
    CHECK(std::abs(h2.lambda_v - 9.0) < 1e-12);
    CHECK(std::abs(h2.lambda_h) < 1e-12);
    CHECK(std::abs(h2.scalar - 27.0) < 1e-12);
    CHECK(std::abs(h2.traceless_norm_sq - 6804.0 / 49.0) < 1e-10);
    CHECK(eigenvalue_ordering(h2) == "vertical > horizontal");
    CHECK(eigenvalue_ordering(variation_curvature(hopf_variation(1, 0.5))) == "horizontal > vertical");
    CHECK(eigenvalue_ordering(h1) == "equal");

    const auto c1 = variation_curvature(cp_variation(1, 1.0));
    CHECK(std::abs(c1.lambda_v - 8.0) < 1e-12);
    CHECK(std::abs(c1.lambda_h - 8.0) < 1e-12);
    CHECK(std::abs(c1.scalar - 48.0) < 1e-12);

    CHECK_THROWS_AS(hopf_variation(0, 1.0), ValidationError);
    CHECK_THROWS_AS(hopf_variation(1, 0.0), ValidationError);
    CHECK_THROWS_AS(cp_variation(1, -1.0), ValidationError);
}

TEST_CASE("round S^7 from the variation agrees with the stereographic chart")
{
    const ChartBackend chart(sphere_chart(7), "sphere:n=7");
    for (const Point& p : halton_points(chart.metric()->domain(), 3)) {
        CHECK(std::abs(chart.state(p).scalar - 42.0) < 1e-9);
    }
    CHECK(hopf_variation(1, 1.0).dimension() == 7);
}

TEST_CASE("Einstein parameters")
{
    for (int n = 1; n <= 3; ++n) {
        const auto hopf = einstein_parameters(hopf_variation(n, 1.0));
        REQUIRE(hopf.size() == 2);
        CHECK(std::abs(hopf[0] - 1.0 / (2 * n + 3)) < 1e-12);
        CHECK(std::abs(hopf[1] - 1.0) < 1e-12);
        const auto cp = einstein_parameters(cp_variation(n, 1.0));
        REQUIRE(cp.size() == 2);
        CHECK(std::abs(cp[0] - 1.0 / (n + 1)) < 1e-12);
        CHECK(std::abs(cp[1] - 1.0) < 1e-12);
        for (double t : hopf) {
            const auto c = variation_curvature(hopf_variation(n, t));
            CHECK(std::abs(c.lambda_v - c.lambda_h) < 1e-12 * (1 + std::abs(c.lambda_h)));
        }
    }
}

TEST_CASE("trace identity and the collected norm displays")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ut(0.05, 5.0);
    std::uniform_int_distribution<int> un(1, 4);
    for (int k = 0; k < 100; ++k) {
        const int n = un(rng);
        const double t = ut(rng);
        for (const auto& m : {hopf_variation(n, t), cp_variation(n, t)}) {
            const auto c = variation_curvature(m);
            CHECK(rel(c.scalar, m.dim_f * c.lambda_v + m.dim_b * c.lambda_h) < 1e-12);
            CHECK(rel(c.traceless_norm_sq, traceless_from_eigs(m, c)) < 1e-12);
            const PointState st = variation_state(m);
            CHECK(rel(st.traceless_norm_sq, c.traceless_norm_sq) < 1e-10);
            CHECK(rel(st.scalar, c.scalar) < 1e-12);
        }
        const double hn = variation_curvature(hopf_variation(n, t)).traceless_norm_sq;
        CHECK(rel(hn, oracle::hopf_traceless_norm_sq(n, t)) < 1e-10);
        // the collected Hopf display has horizontal constant 4(n+2)(4n-1); the
        // expansion gives 12(n+2), and the two agree only for n = 1
        const double d = 4 * n + 3;
        const double fixed = 3 * std::pow(8 * n / d / t + 4 * n * (4 * n + 6) / d * t - 16 * n * (n + 2) / d, 2) +
                             4 * n * std::pow(6 / d / t + (12 * n + 18) / d * t - 12 * (n + 2) / d, 2);
        CHECK(rel(hn, fixed) < 1e-10);
        if (n == 1) CHECK(rel(hn, oracle::hopf_traceless_norm_sq_collected(n, t)) < 1e-10);
        const double cn = variation_curvature(cp_variation(n, t)).traceless_norm_sq;
        CHECK(rel(cn, oracle::cp_traceless_norm_sq(n, t)) < 1e-10);
        CHECK(rel(cn, oracle::cp_traceless_norm_sq_collected(n, t)) < 1e-10);
    }
}

TEST_CASE("assumption margins along the families")
{
    // T1 margin = |Ric|^2 - R lambda = sum over eigen-directions of lambda_i (lambda_i - lambda)
    const auto t1_oracle = [](const CanonicalVariationModel& m, bool use_max) {
        const auto c = variation_curvature(m);
        const double top = use_max ? std::max(c.lambda_v, c.lambda_h) : std::min(c.lambda_v, c.lambda_h);
        return m.dim_f * c.lambda_v * (c.lambda_v - top) + m.dim_b * c.lambda_h * (c.lambda_h - top);
    };
    for (int n = 1; n <= 3; ++n)
        for (double t : {0.01, 0.3, 2.0, 100.0})
            for (const auto& fam : {hopf_variation(n, t), cp_variation(n, t)}) {
                const auto m = variation_assumption_margins(fam);
                const double scale = 1 + std::pow(variation_curvature(fam).scalar, 2);
                CHECK(std::abs(m.t1.positive - t1_oracle(fam, true)) < 1e-10 * scale);
                CHECK(std::abs(m.t1.negative - t1_oracle(fam, false)) < 1e-10 * scale);
                // the T3 matrix is diagonal in the adapted basis with the same entries
                CHECK(std::abs(m.t3.positive - std::min(t1_oracle(fam, true), t1_oracle(fam, false))) < 1e-10 * scale);
            }

    // t >> 1: lambda_H < 0 < lambda_V, so both T1 margins are positive.
    for (int n = 1; n <= 3; ++n) {
        const auto m = variation_assumption_margins(hopf_variation(n, 100.0));
        CHECK(m.t1.positive > 0.0);
        CHECK(m.t1.negative > 0.0);
    }
    // t << 1: both eigenvalues are positive and lambda_V dominates; the 1/t^2 terms
    // of |Ric|^2 and R lambda_V cancel and the positive-direction margin is
    // dimB lambda_H (lambda_H - lambda_V) < 0. Only the s < 0 margin is positive.
    for (const auto& fam : {hopf_variation(1, 0.01), cp_variation(1, 0.01)}) {
        const auto m = variation_assumption_margins(fam);
        const auto c = variation_curvature(fam);
        CHECK(m.t1.positive < 0.0);
        CHECK(m.t1.negative > 0.0);
        CHECK(rel(m.t1.positive, fam.dim_b * c.lambda_h * (c.lambda_h - c.lambda_v)) < 1e-12);
    }

    for (int n = 1; n <= 3; ++n)
        for (double t : einstein_parameters(hopf_variation(n, 1.0))) {
            const auto m = variation_assumption_margins(hopf_variation(n, t));
            const double tol = 1e-9 * (1 + std::pow(variation_curvature(hopf_variation(n, t)).scalar, 3));
            for (const auto* a : {&m.t1, &m.t2, &m.t3, &m.t4}) {
                CHECK(std::abs(a->positive) <= tol);
                CHECK(std::abs(a->negative) <= tol);
            }
        }
}

TEST_CASE("deformed variation stays in the family")
{
    const CanonicalVariationModel m = hopf_variation(1, 2.0);
    const auto c = variation_curvature(m);
    const double s = 0.01;
    const double mean = c.scalar / m.dimension();
    const double a = 1 - s * (c.lambda_v - mean), b = 1 - s * (c.lambda_h - mean);
    CanonicalVariationModel moved = m;
    moved.t = m.t * a / b;
    const PointState d = deformed_variation_state(m, s);
    // b g_{t'} has scalar curvature R(g_{t'}) / b
    CHECK(rel(d.scalar, variation_curvature(moved).scalar / b) < 1e-12);

    const double h = 1e-5;
    const double fd = (deformed_variation_state(m, h).scalar - deformed_variation_state(m, -h).scalar) / (2 * h);
    CHECK(rel(fd, c.traceless_norm_sq) < 1e-6);
    CHECK_THROWS_AS(deformed_variation_state(m, 1.0), GeometryError);
}
