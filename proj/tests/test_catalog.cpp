#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scalrig/catalog.hpp"
#include "scalrig/error.hpp"

using namespace scalrig;

TEST_CASE("reference checks")
{
    CHECK(catalog_reference_check(make_catalog_entry("berger", {{"p", 1.0}, {"q", 3.5}}), {Point{}}) < 1e-10);
    const CatalogEntry product = make_catalog_entry("product", {{"n", 2}, {"m", 2}, {"lambda", 1.0}});
    CHECK(catalog_reference_check(product, sample_points(*product.backend)) < 1e-8);
    CHECK(catalog_reference_check(make_catalog_entry("hopf", {{"n", 1}, {"t", 1.0}}), {Point{}}) < 1e-12);
    CHECK(make_catalog_entry("berger", {}).label == "berger:p=1,q=3.5");
}

TEST_CASE("every entry with a reference matches it at quasi-random points")
{
    const std::vector<std::pair<std::string, Params>> cases{
        {"berger", {{"p", 1.7}, {"q", 2.3}}},
        {"heisenberg", {}},
        {"sl2r", {{"a", 1.0}, {"b", 2.0}, {"c", 0.5}}},
        {"e11", {{"a", 0.7}, {"b", 1.3}, {"c", 2.0}}},
        {"hopf", {{"n", 2}, {"t", 0.4}}},
        {"cp", {{"n", 1}, {"t", 3.0}}},
        {"product", {{"n", 3}, {"m", 2}, {"lambda", 2.5}}},
        {"product", {{"n", 2}, {"m", 3}, {"lambda", 1.0}}},
        {"sphere", {{"n", 3}}},
        {"hyperbolic", {{"m", 3}}},
        {"torus", {{"n", 2}}},
        {"hemisphere", {{"n", 2}}},
    };
    for (const auto& [name, params] : cases) {
        const CatalogEntry e = make_catalog_entry(name, params);
        CAPTURE(e.label);
        REQUIRE(e.reference.has_value());
        const auto pts = sample_points(*e.backend);
        CHECK(pts.size() == (e.backend->homogeneous() ? 1u : 10u));
        CHECK(catalog_reference_check(e, pts) < 1e-8 * (1 + std::abs(e.reference->scalar)));
        // the reference is internally consistent
        CHECK(std::abs(e.reference->ricci_eigs.sum() - e.reference->scalar) < 1e-12 * (1 + std::abs(e.reference->scalar)));
    }
    for (const auto& info : catalog_entries()) CHECK_NOTHROW(make_catalog_entry(info.name, {}));
}

TEST_CASE("product space forms")
{
    for (double lambda : {1.0, 2.0, 5.0}) {
        const Reference r = product_reference(2, 2, lambda);
        CHECK(std::abs(r.scalar - (2 - 2 / lambda)) < 1e-14);
        const ChartBackend b(product_space_form(2, 2, lambda), "product");
        for (const Point& p : sample_points(b)) CHECK(std::abs(b.state(p).scalar - (2 - 2 / lambda)) < 1e-8);
    }
    CHECK(std::abs(product_reference(3, 2, 1.0).scalar - 4.0) < 1e-14);
    const Reference r = product_reference(2, 2, 1.0);
    CHECK((r.ricci_eigs - Vector{{-1.0, -1.0, 1.0, 1.0}}).cwiseAbs().maxCoeff() == 0.0);

    for (int n = 2; n <= 4; ++n)
        for (double lambda : {1.0, 2.0, 5.0}) {
            const ChartBackend b(product_space_form(n, n, lambda), "product");
            for (const Point& p : sample_points(b, 3)) CHECK(assumption_margin(b.state(p), Theorem::T1).positive > 0.0);
        }

    CHECK_THROWS_AS(product_space_form(1, 2, 1.0), ValidationError);
    CHECK_THROWS_AS(product_space_form(5, 4, 1.0), ValidationError);
    CHECK_THROWS_AS(product_space_form(2, 2, 0.5), ValidationError);
}

TEST_CASE("hemisphere eigenfunction")
{
    CHECK(hemisphere_eigenfunction_residual(2, Point{0.0, 0.0}) < 1e-8);
    CHECK(std::abs(hemisphere_eigenfunction_residual(2, Point{0.0, 0.0}, true) - 2.0) < 1e-12);
    for (int n = 2; n <= 4; ++n)
        for (const Point& p : halton_points(sphere_chart(n)->domain(), 10)) {
            CHECK(hemisphere_eigenfunction_residual(n, p) < 1e-8);
            CHECK(std::abs(hemisphere_eigenfunction_residual(n, p, true) - n) < 1e-10);
        }
    CHECK_THROWS_AS(hemisphere_eigenfunction_residual(5, Point(5, 0.0)), ValidationError);
    CHECK_THROWS_AS(hemisphere_eigenfunction_residual(2, Point{0.8, 0.8}), ValidationError);
}

TEST_CASE("registry validation")
{
    CHECK_THROWS_AS(make_catalog_entry("nosuch", {}), ValidationError);
    CHECK_THROWS_AS(make_catalog_entry("berger", {{"r", 1.0}}), ValidationError);
    CHECK_THROWS_AS(make_catalog_entry("hopf", {{"n", 1.5}}), ValidationError);
    CHECK_THROWS_AS(make_catalog_entry("berger", {{"p", 2.0}, {"q", 1.0}}), ValidationError);
    CHECK_THROWS_AS(make_catalog_entry("sl2r", {{"a", -1.0}}), ValidationError);
    for (const auto& info : catalog_entries()) {
        CHECK_FALSE(info.description.empty());
        CHECK((info.backend == "chart" || info.backend == "frame" || info.backend == "submersion"));
    }
}

TEST_CASE("Halton points")
{
    const Box box = Box::cube(2, -1.0, 1.0);
    const auto p = halton_points(box, 3);
    REQUIRE(p.size() == 3);
    // bases 2 and 3, skipping index 0
    CHECK(p[0][0] == doctest::Approx(0.0));
    CHECK(p[0][1] == doctest::Approx(-1.0 / 3));
    CHECK(p[1][0] == doctest::Approx(-0.5));
    CHECK(p[1][1] == doctest::Approx(1.0 / 3));
    for (const auto& x : halton_points(Box::cube(8, 0.0, 1.0), 20)) CHECK(Box::cube(8, 0.0, 1.0).contains(x));
}
