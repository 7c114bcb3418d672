#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "scalrig/catalog.hpp"
#include "scalrig/error.hpp"
#include "scalrig/listing.hpp"
#include "scalrig/oracle.hpp"
#include "scalrig/verify.hpp"

using namespace scalrig;

namespace {

Matrix diag(std::initializer_list<double> d)
{
    Matrix m = Matrix::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
    int i = 0;
    for (double v : d) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

const FrameBackend& berger()
{
    static const FrameBackend b(berger_metric(1.0, 3.5), "berger:p=1,q=3.5");
    return b;
}

// Berger (1, 3.5) deformed by s: diag(a, a, c) with a = 1 + 10s/3, c = 3.5 (1 - 20s/3),
// i.e. a times the Berger metric (1, c/a).
double berger_t1_margin_oracle(double s)
{
    const double a = 1 + 10 * s / 3, c = 3.5 * (1 - 20 * s / 3);
    const double rs = oracle::berger_scalar(1.0, c / a) / a;
    return rs - 1.0 / (1 - 20 * s / 3);
}

const Theorem kAll[] = {Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4};

}  // namespace

TEST_CASE("norm examples")
{
    const Matrix a = diag({2.0, 0.5, 1.5});
    CHECK(std::abs(norm1(a, a) - 1.0) < 1e-14);
    CHECK(std::abs(norm1(a, 4 * a) - 0.5) < 1e-14);
    CHECK(std::abs(norm1(Matrix::Identity(2, 2), diag({1.0, 1.0 / 9})) - 3.0) < 1e-13);
    CHECK(std::abs(norm2(a, a) - 1.0) < 1e-14);
    CHECK(std::abs(norm2(Matrix::Identity(3, 3), diag({1.0, 0.25, 1.0 / 9})) - 6.0) < 1e-12);
    CHECK(std::abs(norm2(Matrix::Identity(2, 2), diag({1.0, 1.0 / 9})) - 3.0) < 1e-13);
    CHECK_THROWS_AS(norm2(Matrix::Identity(1, 1), Matrix::Identity(1, 1)), ValidationError);
    CHECK_THROWS_AS(norm1(-Matrix::Identity(2, 2), Matrix::Identity(2, 2)), GeometryError);
}

TEST_CASE("norm properties on random pairs")
{
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        const int dim = 2 + k % 5;
        const Matrix a = random_spd(rng, dim), b = random_spd(rng, dim), p = random_spd(rng, dim);
        const double c = rng.uniform(0.2, 5.0);
        CHECK(std::abs(norm1(a, c * b) - norm1(a, b) / std::sqrt(c)) < 1e-10 * norm1(a, b));
        CHECK(std::abs(norm2(a, c * b) - norm2(a, b) / c) < 1e-10 * norm2(a, b));
        // the norms are invariant under a common change of basis
        CHECK(std::abs(norm1(p * a * p, p * b * p) - norm1(a, b)) < 1e-9 * norm1(a, b));
        CHECK(std::abs(norm2(p * a * p, p * b * p) - norm2(a, b)) < 1e-9 * norm2(a, b));
        // 2-vector ratios are products of two 1-vector ratios
        CHECK(norm2(a, b) <= norm1(a, b) * norm1(a, b) * (1 + 1e-12));
        CHECK(std::abs(norm2(a, b) - oracle::norm2_brute_force(a, b)) < 1e-10 * norm2(a, b));
    }
}

TEST_CASE("deformation shifts and SPD bounds")
{
    const PointState st = berger().state({});
    const Deformation d = deform(st, 0.1);
    CHECK(std::abs(d.shifts(0) - 4.0 / 3) < 1e-12);
    CHECK(std::abs(d.shifts(1) - 4.0 / 3) < 1e-12);
    CHECK(std::abs(d.shifts(2) - 1.0 / 3) < 1e-12);
    CHECK(std::abs(d.bounds.upper - 0.15) < 1e-12);
    CHECK(std::abs(d.bounds.lower + 0.3) < 1e-12);
    CHECK((deform(st, 0.0).g_s - st.g).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(deform(st, 0.15), GeometryError);
    CHECK_THROWS_AS(deform(st, std::numeric_limits<double>::infinity()), ValidationError);

    const PointState round = FrameBackend(berger_metric(1.0, 1.0), "round").state({});
    const Deformation e = deform(round, 7.0);
    CHECK((e.g_s - round.g).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::isinf(e.bounds.upper));
}

TEST_CASE("assumption margins")
{
    const PointState st = berger().state({});
    // eps = 1: |Ric°|^2 = (3/2)(8 - 4/3)^2 and R (lambda_max - R/3) = 8 - 4/3
    CHECK(std::abs(st.traceless_norm_sq - 1.5 * std::pow(8 - 4.0 / 3, 2)) < 1e-10);
    const AssumptionMargin t1 = assumption_margin(st, Theorem::T1);
    CHECK(std::abs(t1.positive - 60.0) < 1e-9);
    CHECK(std::abs(t1.negative - (200.0 / 3 + 1.0 / 3 + 3.0)) < 1e-9);

    for (const auto& b : {FrameBackend(berger_metric(1.0, 1.0), "round"), FrameBackend(make_frame_metric(su2(), 2.0 * Matrix::Identity(3, 3)), "round2")}) {
        const PointState e = b.state({});
        for (Theorem t : kAll) {
            const AssumptionMargin m = assumption_margin(e, t);
            CHECK(m.positive <= 0.0);
            CHECK(m.negative <= 0.0);
            CHECK(std::abs(m.positive) < 1e-10);
        }
    }

    const ChartBackend product(product_space_form(2, 2, 1.0), "product");
    for (const Point& p : halton_points(product.metric()->domain(), 4)) {
        const PointState ps = product.state(p);
        CHECK(std::abs(ps.scalar) < 1e-8);
        CHECK(std::abs(ps.traceless_norm_sq - 4.0) < 1e-8);
        CHECK(std::abs(ps.lap_scalar) < 1e-6);
        CHECK(std::abs(assumption_margin(ps, Theorem::T1).positive - 4.0) < 1e-6);
    }
    CHECK(laplacian_weight(4) == doctest::Approx(10.0 / 8));
}

TEST_CASE("conclusion margins")
{
    const ChartBackend sphere(sphere_chart(3), "sphere");
    for (Theorem t : kAll) {
        CHECK(conclusion_margin(berger(), {}, 0.0, t) == 0.0);
        CHECK(conclusion_margin(sphere, sphere.default_points()[0], 0.0, t) == 0.0);
    }
    for (double s : {-0.2, -1e-3, 1e-3, 0.01, 0.05, 0.1, 0.14}) {
        const double m = conclusion_margin(berger(), {}, s, Theorem::T1);
        if (s > 0) CHECK(std::abs(m - berger_t1_margin_oracle(s)) < 1e-10 * (1 + std::abs(m)));
        if (s > 0 && s <= 0.1) CHECK(m > 0.0);
    }
    // near the SPD limit the shrinking fiber dominates and the conclusion fails
    CHECK(conclusion_margin(berger(), {}, 0.14, Theorem::T1) < 0.0);
    const double small = conclusion_margin(berger(), {}, 1e-3, Theorem::T1);
    CHECK(std::abs(small / 1e-3 - 60.0) < 0.6);

    // Einstein metrics are fixed by the deformation.
    const FrameBackend round(berger_metric(1.0, 1.0), "round");
    for (Theorem t : kAll) CHECK(std::abs(conclusion_margin(round, {}, 0.3, t)) < 1e-10);
    CHECK_THROWS_AS(conclusion_margin(berger(), {}, 0.2, Theorem::T1), GeometryError);
    CHECK_THROWS_AS(conclusion_margin(berger(), Point{0.0}, 0.1, Theorem::T1), ValidationError);
}

TEST_CASE("first-order slopes on homogeneous metrics")
{
    std::vector<std::shared_ptr<GeometryBackend>> backends{
        std::make_shared<FrameBackend>(berger_metric(1.0, 3.5), "berger"),
        std::make_shared<FrameBackend>(berger_metric(1.5, 4.0), "berger2"),
        std::make_shared<FrameBackend>(make_frame_metric(sl2r(), diag({1.0, 2.0, 3.0})), "sl2r"),
        std::make_shared<FrameBackend>(make_frame_metric(heisenberg(), diag({1.0, 1.0, 1.0})), "heisenberg"),
        std::make_shared<SubmersionBackend>(hopf_variation(1, 0.01), "hopf"),
        std::make_shared<SubmersionBackend>(cp_variation(1, 0.01), "cp"),
        std::make_shared<SubmersionBackend>(hopf_variation(2, 3.0), "hopf2")};
    for (const auto& b : backends) {
        const PointState st = b->state({});
        for (Direction d : {Direction::positive, Direction::negative})
            for (Theorem t : {Theorem::T1, Theorem::T3, Theorem::T4}) {
                const AssumptionMargin a = assumption_margin(st, t);
                const double want = d == Direction::positive ? a.positive : a.negative;
                const double got = conclusion_slope(*b, {}, t, d, 1e-5);
                CAPTURE(b->label());
                CAPTURE(to_string(t));
                CHECK(std::abs(got - want) <= 0.01 * std::abs(want) + 1e-6);
            }
        // T2: the slope bounds the assumption from above for s > 0
        const AssumptionMargin a2 = assumption_margin(st, Theorem::T2);
        CHECK(conclusion_slope(*b, {}, Theorem::T2, Direction::positive, 1e-5) >= a2.positive - 1e-5 * (1 + std::abs(a2.positive)));
    }
    CHECK_THROWS_AS(conclusion_slope(berger(), {}, Theorem::T1, Direction::positive, 0.0), ValidationError);
}

TEST_CASE("T3 matrix: first-order finite difference entrywise")
{
    // d/ds (R_s g_s - R g) at 0 = |Ric°|^2 g - R Ric° for homogeneous metrics
    const PointState st = berger().state({});
    const double h = 1e-5;
    const PointState p = berger().deformed_state({}, h), m = berger().deformed_state({}, -h);
    const Matrix fd = (p.scalar * p.g - m.scalar * m.g) / (2 * h);
    const Matrix expected = st.traceless_norm_sq * st.g - st.scalar * st.traceless;
    CHECK((fd - expected).cwiseAbs().maxCoeff() < 1e-6 * (1 + expected.cwiseAbs().maxCoeff()));
}

TEST_CASE("Laplacian coefficient of the first-order scalar variation")
{
    // On a chart, dR(g - s Ric°)/ds at 0 = |Ric°|^2 + (2 - n)/(2n) ΔR.
    Rng rng(11);
    for (int dim = 2; dim <= 4; ++dim) {
        const ChartBackend b(random_polynomial_metric(rng, dim, 0.25), "random");
        const Point x = b.default_points()[0];
        const PointState st = b.state(x);
        const double h = 1e-4;
        const double fd = (b.deformed_state(x, h).scalar - b.deformed_state(x, -h).scalar) / (2 * h);
        const double expected = st.traceless_norm_sq + (2.0 - dim) / (2.0 * dim) * st.lap_scalar;
        CHECK(std::abs(fd - expected) < 1e-6 * (1 + std::abs(st.traceless_norm_sq) + std::abs(st.lap_scalar)));
        // the ΔR term is not negligible here
        CHECK(std::abs(st.lap_scalar) > 1e-3);
    }
}

TEST_CASE("s scans")
{
    const ScanResult r = scan_s(berger(), {Point{}}, Theorem::T1, Direction::positive, 1.0, 12);
    REQUIRE(r.spd_limit.has_value());
    CHECK(std::abs(*r.spd_limit - 0.15) < 1e-12);
    CHECK(r.s_grid.size() == 12);
    CHECK(r.s_grid.back() == doctest::Approx(0.075));
    CHECK(r.s_grid.front() == doctest::Approx(0.15 * std::ldexp(1.0, -12)));
    CHECK_FALSE(r.degenerate);
    REQUIRE(r.admissible.has_value());
    CHECK(r.admissible->first == 0.0);
    CHECK(r.admissible->second == doctest::Approx(0.075));
    CHECK(std::abs(r.slope_at_zero[0] - 60.0) < 0.6);
    for (std::size_t k = 0; k < r.s_grid.size(); ++k)
        CHECK(std::abs(r.margins[k][0] - berger_t1_margin_oracle(r.s_grid[k])) < 1e-9);

    const ScanResult untruncated = scan_s(berger(), {Point{}}, Theorem::T1, Direction::positive, 0.1, 4);
    CHECK(untruncated.s_grid.back() == 0.1);

    const ScanResult neg = scan_s(berger(), {Point{}}, Theorem::T1, Direction::negative, 1.0, 6);
    CHECK(std::abs(*neg.spd_limit - 0.3) < 1e-12);
    CHECK(neg.s_grid.back() == doctest::Approx(-0.15));

    const FrameBackend round(berger_metric(1.0, 1.0), "round");
    const ScanResult e = scan_s(round, {Point{}}, Theorem::T1, Direction::positive, 1.0, 8);
    CHECK(e.degenerate);
    CHECK_FALSE(e.admissible.has_value());
    CHECK_FALSE(e.spd_limit.has_value());

    const ChartBackend sphere(sphere_chart(2), "sphere");
    CHECK(scan_s(sphere, sample_points(sphere, 4), Theorem::T3, Direction::positive, 1.0, 6).degenerate);

    CHECK_THROWS_AS(scan_s(berger(), {Point{}}, Theorem::T1, Direction::positive, -1.0, 12), ValidationError);
    CHECK_THROWS_AS(scan_s(berger(), {Point{}}, Theorem::T1, Direction::positive, 1.0, 1), ValidationError);
    CHECK_THROWS_AS(scan_s(berger(), {}, Theorem::T1, Direction::positive, 1.0, 12), ValidationError);
}

TEST_CASE("rigidity hypotheses")
{
    const ChartBackend g1(product_space_form(2, 2, 1.0), "l1"), g2(product_space_form(2, 2, 2.0), "l2");
    std::vector<PointState> s1, s2;
    for (const Point& p : halton_points(g1.metric()->domain(), 5)) {
        s1.push_back(g1.state(p));
        s2.push_back(g2.state(p));
    }
    const HypothesisResult d1 = rigidity_hypothesis(s1, s2, Hypothesis::D1);
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(d1.holds[i]);
        CHECK(std::abs(d1.margins[i] - 1.0) < 1e-8);
    }

    for (Hypothesis h : {Hypothesis::D1, Hypothesis::D2, Hypothesis::D3, Hypothesis::D4}) {
        const HypothesisResult same = rigidity_hypothesis(s2, s2, h);
        for (std::size_t i = 0; i < s2.size(); ++i) {
            CHECK(same.holds[i]);
            CHECK(std::abs(same.margins[i]) < 1e-8);
        }
    }

    // homothety g = 2 g0 saturates D1
    const PointState base = berger().state({});
    const PointState doubled = FrameBackend(make_frame_metric(su2(), 2.0 * base.g), "double").state({});
    CHECK(std::abs(doubled.scalar - base.scalar / 2) < 1e-12);
    const HypothesisResult h = rigidity_hypothesis({base}, {doubled}, Hypothesis::D1);
    CHECK(h.holds[0]);
    CHECK(std::abs(h.margins[0]) < 1e-12);

    CHECK_THROWS_AS(rigidity_hypothesis({}, {}, Hypothesis::D1), ValidationError);
    CHECK_THROWS_AS(rigidity_hypothesis({base}, {base, base}, Hypothesis::D1), ValidationError);
    CHECK_THROWS_AS(hypothesis_from_int(5), ValidationError);
}

TEST_CASE("minimum scalar functionals")
{
    const PointState round = FrameBackend(berger_metric(1.0, 1.0), "round").state({});
    const RemarkFunctionals same = remark_functionals({round}, {round});
    CHECK(std::abs(same.f1 - 6.0) < 1e-12);
    CHECK(std::abs(same.f2 - 6.0) < 1e-12);
    CHECK(std::abs(same.r_min - 6.0) < 1e-12);

    const PointState scaled = FrameBackend(make_frame_metric(su2(), 3.0 * round.g), "scaled").state({});
    const RemarkFunctionals s = remark_functionals({round}, {scaled});
    CHECK(std::abs(s.f1 - 2.0) < 1e-12);
    CHECK(std::abs(s.r_min - 2.0) < 1e-12);

    // The Berger metric is not rigid: its deformation beats the bound, and the gap is the T1 margin.
    const PointState b = berger().state({});
    const PointState d = berger().deformed_state({}, 0.05);
    const RemarkFunctionals f = remark_functionals({b}, {d});
    CHECK(f.r_min > f.f1);
    CHECK(std::abs((f.r_min - f.f1) - berger_t1_margin_oracle(0.05)) < 1e-10);
}

TEST_CASE("conformal deformation")
{
    const ChartBackend torus(torus_chart(2), "torus");
    const Point x{0.7, -1.2};

    const ConformalResult c = conformal_deform(torus, parse_expression("3", 2), 0.1, {x});
    CHECK(std::abs(c.points[0].first_order) < 1e-14);
    CHECK(std::abs(c.points[0].deformed_scalar) < 1e-12);

    const ChartBackend sphere(sphere_chart(2), "sphere");
    const Point y{0.2, 0.3};
    const ConformalResult h = conformal_deform(sphere, parse_expression("2", 2), 0.25, {y});
    CHECK(std::abs(h.points[0].deformed_scalar - 2.0 / 1.5) < 1e-10);

    const ConformalResult t = conformal_deform(torus, parse_expression("cos(x1)", 2), 0.01, {x});
    CHECK(std::abs(t.points[0].laplacian_u + std::cos(0.7)) < 1e-12);
    CHECK(std::abs(t.points[0].first_order - 0.01 * std::cos(0.7)) < 1e-14);
    CHECK(t.slope >= 1.9);

    const ConformalResult hem = conformal_deform(sphere, hemisphere_height(2), 0.01, {y});
    const double u = (1 - 0.13) / (1 + 0.13);
    CHECK(std::abs(hem.points[0].u - u) < 1e-14);
    CHECK(std::abs(hem.points[0].laplacian_u + 2 * u) < 1e-9);
    CHECK(std::abs(hem.points[0].first_order - 0.01 * 2 * u) < 1e-10);
    CHECK(hem.slope >= 1.9);
    CHECK(std::abs(hem.points[0].second_order_empirical - hem.points[0].second_order_conformal_law) <
          1e-3 * (1 + std::abs(hem.points[0].second_order_conformal_law)));

    CHECK_THROWS_AS(conformal_deform(berger(), parse_expression("1", 3), 0.1, {Point{}}), ValidationError);
    CHECK_THROWS_AS(conformal_deform(torus, parse_expression("x1", 2), 0.0, {x}), ValidationError);
    CHECK_THROWS_AS(conformal_deform(torus, parse_expression("x3", 3), 0.1, {x}), ValidationError);
    CHECK_THROWS_AS(conformal_deform(torus, parse_expression("1", 2), -2.0, {x}), GeometryError);
}
