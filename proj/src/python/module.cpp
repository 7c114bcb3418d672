#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "scalrig/catalog.hpp"
#include "scalrig/cli.hpp"
#include "scalrig/error.hpp"
#include "scalrig/listing.hpp"
#include "scalrig/report.hpp"
#include "scalrig/verify.hpp"

namespace py = pybind11;
using namespace scalrig;

namespace {

Theorem theorem_arg(int k) { return theorem_from_int(k); }

Direction direction_arg(const std::string& d)
{
    if (d == "pos") return Direction::positive;
    if (d == "neg") return Direction::negative;
    throw ValidationError("direction must be pos or neg");
}

BackendPtr metric(const std::string& selector) { return resolve_metric(selector).backend; }

py::dict state_dict(const PointState& st)
{
    py::dict d;
    d["metric"] = st.g;
    d["ricci"] = st.ric;
    d["traceless_ricci"] = st.traceless;
    d["scalar"] = st.scalar;
    d["ricci_eigs"] = st.ricci_eigs;
    d["traceless_norm_sq"] = st.traceless_norm_sq;
    d["laplacian_scalar"] = st.lap_scalar;
    return d;
}

py::dict margin_dict(const AssumptionMargin& m)
{
    py::dict d;
    d["positive"] = m.positive;
    d["negative"] = m.negative;
    if (m.theorem == Theorem::T2) {
        d["lambda_min_branch"] = m.lambda_min_branch;
        d["lambda_max_branch"] = m.lambda_max_branch;
        d["pairing"] = m.pairing;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Curvature of explicit metrics and the traceless-Ricci deformation";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
    py::register_exception<GeometryError>(m, "GeometryError", PyExc_RuntimeError);

    m.attr("__version__") = kVersion;

    m.def("catalog", [] {
        py::list out;
        for (const auto& e : catalog_entries()) {
            py::dict d;
            d["name"] = e.name;
            d["backend"] = e.backend;
            d["description"] = e.description;
            py::list params;
            for (const auto& p : e.params) params.append(py::make_tuple(p.name, p.type, p.default_value));
            d["params"] = params;
            out.append(d);
        }
        return out;
    });

    m.def(
        "curvature",
        [](const std::string& selector, const Point& point) {
            const BackendPtr b = metric(selector);
            return state_dict(b->state(point.empty() && !b->homogeneous() ? b->default_points()[0] : point));
        },
        py::arg("metric"), py::arg("point") = Point{});

    m.def(
        "deformed_curvature",
        [](const std::string& selector, double s, const Point& point) {
            return state_dict(metric(selector)->deformed_state(point, s));
        },
        py::arg("metric"), py::arg("s"), py::arg("point") = Point{});

    m.def(
        "assumption_margin",
        [](const std::string& selector, int theorem, const Point& point) {
            return margin_dict(assumption_margin(metric(selector)->state(point), theorem_arg(theorem)));
        },
        py::arg("metric"), py::arg("theorem"), py::arg("point") = Point{});

    m.def(
        "conclusion_margin",
        [](const std::string& selector, int theorem, double s, const Point& point) {
            return conclusion_margin(*metric(selector), point, s, theorem_arg(theorem));
        },
        py::arg("metric"), py::arg("theorem"), py::arg("s"), py::arg("point") = Point{});

    m.def(
        "conclusion_slope",
        [](const std::string& selector, int theorem, const std::string& direction, const Point& point) {
            return conclusion_slope(*metric(selector), point, theorem_arg(theorem), direction_arg(direction));
        },
        py::arg("metric"), py::arg("theorem"), py::arg("direction") = "pos", py::arg("point") = Point{});

    m.def(
        "scan",
        [](const std::string& selector, int theorem, const std::string& direction, double s_max, int steps,
           std::vector<Point> points) {
            const BackendPtr b = metric(selector);
            if (points.empty()) points = b->default_points();
            const ScanResult r = scan_s(*b, points, theorem_arg(theorem), direction_arg(direction), s_max, steps);
            py::dict d;
            d["s_grid"] = r.s_grid;
            d["margins"] = r.margins;
            d["spd_ok"] = r.spd_ok;
            d["spd_limit"] = r.spd_limit;
            d["degenerate"] = r.degenerate;
            d["admissible"] = r.admissible;
            d["slope_at_zero"] = r.slope_at_zero;
            d["assumption"] = r.assumption;
            return d;
        },
        py::arg("metric"), py::arg("theorem"), py::arg("direction") = "pos", py::arg("s_max") = 1.0,
        py::arg("steps") = 12, py::arg("points") = std::vector<Point>{});

    m.def("norm1", &norm1, py::arg("a"), py::arg("b"));
    m.def("norm2", &norm2, py::arg("a"), py::arg("b"));

    m.def(
        "variation",
        [](const std::string& family, int n, double t) {
            if (family != "hopf" && family != "cp") throw ValidationError("family must be hopf or cp");
            const auto model = family == "hopf" ? hopf_variation(n, t) : cp_variation(n, t);
            const auto c = variation_curvature(model);
            py::dict d;
            d["lambda_v"] = c.lambda_v;
            d["lambda_h"] = c.lambda_h;
            d["scalar"] = c.scalar;
            d["traceless_norm_sq"] = c.traceless_norm_sq;
            d["einstein_parameters"] = einstein_parameters(model);
            return d;
        },
        py::arg("family"), py::arg("n"), py::arg("t"));

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed) {
            const SuiteResult r = run_suite(suite, seed);
            py::list checks;
            for (const auto& c : r.checks) {
                py::dict d;
                d["name"] = c.name;
                d["value"] = c.value;
                d["threshold"] = c.threshold;
                d["passed"] = c.passed();
                checks.append(d);
            }
            return py::make_tuple(r.passed(), checks);
        },
        py::arg("suite"), py::arg("seed") = 1);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
