#include "scalrig/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "scalrig/catalog.hpp"
#include "scalrig/error.hpp"
#include "scalrig/listing.hpp"
#include "scalrig/oracle.hpp"

namespace scalrig {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Point random_point(Rng& rng, int dim, double half)
{
    Point x(static_cast<std::size_t>(dim));
    for (auto& xi : x) xi = rng.uniform(-half, half);
    return x;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

class Tracker {
public:
    Tracker(std::string name, double threshold, bool at_most = true)
    {
        c_.name = std::move(name);
        c_.threshold = threshold;
        c_.at_most = at_most;
        c_.value = at_most ? 0.0 : std::numeric_limits<double>::infinity();
    }
    void add(double v)
    {
        ++c_.samples;
        // NaN never passes
        if (std::isnan(v) || std::isnan(c_.value)) c_.value = std::numeric_limits<double>::quiet_NaN();
        else c_.value = c_.at_most ? std::max(c_.value, v) : std::min(c_.value, v);
    }
    Check done() const { return c_; }

private:
    Check c_;
};

// ---------------------------------------------------------------- suites

SuiteResult appendix_suite(std::uint64_t seed)
{
    Rng rng(seed);
    Tracker ricci("ricci_via_background_max_error", 1e-7);
    Tracker diff("difference_tensor_discrepancy", 1e-10);
    Tracker inverse("inverse_expansion_identity_residual", 1e-10);
    Tracker bianchi("contracted_bianchi_residual", 1e-6);
    const std::vector<double> ts{1e-1, 1e-2, 1e-3, 1e-4};
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + trial % 3;
        auto g = random_polynomial_metric(rng, dim, 0.2);
        auto gb = random_polynomial_metric(rng, dim, 0.2);
        auto h = random_polynomial_metric(rng, dim, 0.5, false);
        const Point x = random_point(rng, dim, 0.4);
        const Matrix direct = curvature_report(*g, x, false).ricci;
        ricci.add((ricci_via_background(*g, *gb, x) - direct).cwiseAbs().maxCoeff());
        diff.add(difference_tensor(*g, *gb, x).discrepancy);
        inverse.add(expansion_residual(g, h, x, ts).inverse_identity_residual);
        bianchi.add(bianchi_residual(*g, x));
    }
    return {"appendix", seed, {ricci.done(), diff.done(), inverse.done(), bianchi.done()}};
}

SuiteResult expansion_suite(std::uint64_t seed)
{
    Rng rng(seed);
    Tracker slope("linearization_min_loglog_slope", 1.9, false);
    Tracker contracted("dr_minus_ricci_relative_error", 1e-6);
    Tracker deformation("deformation_first_order_relative_error", 1e-5);
    const std::vector<double> ts{1e-1, 1e-2, 1e-3, 1e-4};
    for (int trial = 0; trial < 12; ++trial) {
        const int dim = 2 + trial % 3;
        auto g = random_polynomial_metric(rng, dim, 0.2);
        auto h = random_polynomial_metric(rng, dim, 0.5, false);
        slope.add(expansion_residual(g, h, random_point(rng, dim, 0.4), ts).slope);
    }

    // DR(-Ric) = ΔR/2 + |Ric|^2 on catalog charts and random metrics.
    std::vector<std::shared_ptr<ChartMetric>> charts{sphere_chart(3), hyperbolic_chart(3), product_space_form(2, 2, 2.0),
                                                     product_space_form(3, 2, 1.0)};
    for (int k = 0; k < 3; ++k) charts.push_back(random_polynomial_metric(rng, 3, 0.2));
    for (const auto& g : charts) {
        const auto mr = std::make_shared<RicciField>(g, -1.0);
        for (const Point& x : halton_points(g->domain(), 3, 1 + rng.integer(0, 50))) {
            const CurvatureReport rep = curvature_report(*g, x, true);
            const Matrix a = rep.inverse_metric * rep.ricci;
            const double expected = 0.5 * *rep.laplacian_scalar + (a * a).trace();
            contracted.add(relative(linearized_scalar(*g, *mr, x), expected));
        }
    }

    // dR(g - s Ric°)/ds at 0 = |Ric°|^2 + (2 - n)/(2n) ΔR.
    for (int k = 0; k < 4; ++k) {
        const int dim = 2 + k % 3;
        const auto g = random_polynomial_metric(rng, dim, 0.2);
        const ChartBackend backend(g, "random");
        const Point x = random_point(rng, dim, 0.4);
        const PointState st = backend.state(x);
        const double h = 1e-4;
        const double fd = (backend.deformed_state(x, h).scalar - backend.deformed_state(x, -h).scalar) / (2 * h);
        const double expected = st.traceless_norm_sq + (2.0 - dim) / (2.0 * dim) * st.lap_scalar;
        deformation.add(std::abs(fd - expected) / std::max(1.0, std::abs(st.traceless_norm_sq) + std::abs(st.lap_scalar)));
    }
    return {"expansion", seed, {slope.done(), contracted.done(), deformation.done()}};
}

SuiteResult conformal_suite(std::uint64_t seed)
{
    Rng rng(seed);
    Tracker slope("conformal_sup_residual_min_slope", 1.9, false);
    Tracker eigen("hemisphere_eigenfunction_residual", 1e-8);
    Tracker control("constant_control_deviation", 1e-10);

    const auto torus = std::make_shared<ChartBackend>(torus_chart(2), "torus:n=2");
    const double s = rng.uniform(0.005, 0.02);
    std::vector<Point> tp;
    for (int k = 0; k < 8; ++k) tp.push_back(random_point(rng, 2, 3.0));
    slope.add(conformal_deform(*torus, parse_expression("cos(x1)", 2), s, tp).slope);

    for (int n = 2; n <= 4; ++n) {
        const auto sphere = std::make_shared<ChartBackend>(sphere_chart(n), "hemisphere");
        const auto pts = halton_points(sphere->metric()->domain(), 8, 1 + rng.integer(0, 50));
        slope.add(conformal_deform(*sphere, hemisphere_height(n), 0.01, pts).slope);
        for (const Point& p : pts) {
            eigen.add(hemisphere_eigenfunction_residual(n, p));
            control.add(std::abs(hemisphere_eigenfunction_residual(n, p, true) - n));
        }
    }
    return {"conformal", seed, {slope.done(), eigen.done(), control.done()}};
}

PointState random_state(Rng& rng, int dim, double positive_shift)
{
    const Matrix g = random_spd(rng, dim);
    Matrix r(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) r(i, j) = r(j, i) = rng.uniform(-1.0, 1.0);
    return make_state(g, r + positive_shift * g, 0.0);
}

SuiteResult norms_suite(std::uint64_t seed)
{
    Rng rng(seed);
    Tracker shortcut("norm2_shortcut_vs_brute_force", 1e-10);
    Tracker reciprocity("norm1_reciprocity_deficit", 1e-12);
    Tracker implication("d3_without_d1_count", 0.0);
    Tracker equivalence("d2_d4_disagreement_count", 0.0);
    for (int k = 0; k < 200; ++k) {
        const int dim = 2 + k % 5;
        const Matrix a = random_spd(rng, dim);
        const Matrix b = random_spd(rng, dim);
        const double fast = norm2(a, b);
        shortcut.add(std::abs(fast - oracle::norm2_brute_force(a, b)) / std::max(1.0, fast));
        reciprocity.add(std::max(0.0, 1.0 - norm1(a, b) * norm1(b, a)));
    }
    int bad_implication = 0, disagreements = 0;
    for (int k = 0; k < 200; ++k) {
        const int dim = 2 + k % 5;
        const PointState g0 = random_state(rng, dim, rng.uniform(-1.0, 1.0));
        const PointState g = random_state(rng, dim, rng.uniform(-1.0, 1.0));
        const bool d1 = rigidity_hypothesis({g0}, {g}, Hypothesis::D1).holds[0];
        const bool d3 = rigidity_hypothesis({g0}, {g}, Hypothesis::D3).holds[0];
        if (d3 && !d1) ++bad_implication;

        const PointState p0 = random_state(rng, dim, 2.0);
        const PointState p = random_state(rng, dim, 2.0);
        if (p0.scalar > 0 && p.scalar > 0 &&
            rigidity_hypothesis({p0}, {p}, Hypothesis::D2).holds[0] != rigidity_hypothesis({p0}, {p}, Hypothesis::D4).holds[0])
            ++disagreements;
    }
    implication.add(bad_implication);
    equivalence.add(disagreements);
    return {"norms", seed, {shortcut.done(), reciprocity.done(), implication.done(), equivalence.done()}};
}

}  // namespace

std::shared_ptr<ChartMetric> random_polynomial_metric(Rng& rng, int dim, double amp, bool identity_base)
{
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            std::string e = (i == j && identity_base) ? "1" : "0";
            for (int a = 1; a <= dim; ++a) {
                e += "+(" + fmt(rng.uniform(-amp, amp)) + ")*x" + std::to_string(a);
                for (int b = a; b <= dim; ++b)
                    e += "+(" + fmt(rng.uniform(-amp, amp)) + ")*x" + std::to_string(a) + "*x" + std::to_string(b);
            }
            rows[i].push_back(e);
        }
    return ChartMetric::from_strings(dim, Box::cube(dim, -0.5, 0.5), rows);
}

Matrix random_spd(Rng& rng, int dim)
{
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    return symmetrized(a * a.transpose() / dim + 0.1 * Matrix::Identity(dim, dim));
}

bool SuiteResult::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"appendix", "expansion", "conformal", "norms"};
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed)
{
    if (name == "appendix") return appendix_suite(seed);
    if (name == "expansion") return expansion_suite(seed);
    if (name == "conformal") return conformal_suite(seed);
    if (name == "norms") return norms_suite(seed);
    throw ValidationError("unknown suite '" + name + "' (expected appendix, expansion, conformal or norms)");
}

}  // namespace scalrig
