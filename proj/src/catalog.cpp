#include "scalrig/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "scalrig/error.hpp"
#include "scalrig/oracle.hpp"

namespace scalrig {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string var(int i) { return "x" + std::to_string(i + 1); }

// x_{first+1}^2 + ... + x_{first+count}^2
std::string radius_sq(int first, int count)
{
    std::string s;
    for (int i = first; i < first + count; ++i) s += (i > first ? "+" : "") + var(i) + "^2";
    return s;
}

std::shared_ptr<ChartMetric> diagonal_chart(int dim, const Box& box, const std::vector<std::string>& diag)
{
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) rows[i].push_back(i == j ? diag[i] : "0");
    return ChartMetric::from_strings(dim, box, rows);
}

Box ball_box(const std::vector<int>& blocks)
{
    Box b;
    for (int k : blocks) {
        const double h = 0.9 / std::sqrt(static_cast<double>(k));
        for (int i = 0; i < k; ++i) {
            b.lower.push_back(-h);
            b.upper.push_back(h);
        }
    }
    return b;
}

void require_range(const char* what, int v, int lo, int hi)
{
    if (v < lo || v > hi)
        throw ValidationError(std::string(what) + " must be in " + std::to_string(lo) + ".." + std::to_string(hi));
}

Vector repeated(std::initializer_list<std::pair<double, int>> parts)
{
    std::vector<double> v;
    for (auto [value, count] : parts) v.insert(v.end(), static_cast<std::size_t>(count), value);
    std::sort(v.begin(), v.end());
    return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Reference from_eigs(Vector eigs)
{
    std::sort(eigs.begin(), eigs.end());
    Reference r;
    r.scalar = eigs.sum();
    r.ricci_eigs = std::move(eigs);
    return r;
}

Reference from_array(const std::array<double, 3>& a) { return from_eigs(Vector{{a[0], a[1], a[2]}}); }

}  // namespace

std::shared_ptr<ChartMetric> sphere_chart(int n)
{
    require_range("sphere dimension", n, 2, 8);
    return diagonal_chart(n, ball_box({n}), std::vector<std::string>(n, "4/(1+" + radius_sq(0, n) + ")^2"));
}

std::shared_ptr<ChartMetric> hyperbolic_chart(int m)
{
    require_range("hyperbolic dimension", m, 2, 8);
    return diagonal_chart(m, ball_box({m}), std::vector<std::string>(m, "4/(1-(" + radius_sq(0, m) + "))^2"));
}

std::shared_ptr<ChartMetric> torus_chart(int n)
{
    require_range("torus dimension", n, 1, 8);
    return diagonal_chart(n, Box::cube(n, -std::numbers::pi, std::numbers::pi), std::vector<std::string>(n, "1"));
}

std::shared_ptr<ChartMetric> product_space_form(int n, int m, double lambda)
{
    require_range("n", n, 2, 6);
    require_range("m", m, 2, 6);
    if (n + m > 8) throw ValidationError("n + m must be at most 8");
    if (!std::isfinite(lambda) || lambda < 1.0) throw ValidationError("lambda must be >= 1");
    std::vector<std::string> diag(static_cast<std::size_t>(n), "4/(1+" + radius_sq(0, n) + ")^2");
    diag.insert(diag.end(), static_cast<std::size_t>(m), fmt(lambda) + "*4/(1-(" + radius_sq(n, m) + "))^2");
    return diagonal_chart(n + m, ball_box({n, m}), diag);
}

Reference product_reference(int n, int m, double lambda)
{
    Reference r;
    r.ricci_eigs = repeated({{n - 1.0, n}, {-(m - 1.0) / lambda, m}});
    r.scalar = n * (n - 1.0) - m * (m - 1.0) / lambda;
    return r;
}

Expression hemisphere_height(int n)
{
    require_range("hemisphere dimension", n, 2, 4);
    const std::string r2 = radius_sq(0, n);
    return parse_expression("(1-(" + r2 + "))/(1+" + r2 + ")", n);
}

double hemisphere_eigenfunction_residual(int n, std::span<const double> point, bool constant_control)
{
    const Expression u = constant_control ? Expression::constant(1.0) : hemisphere_height(n);
    const auto g = sphere_chart(n);
    if (static_cast<int>(point.size()) != n) throw ValidationError("point dimension does not match the hemisphere");
    double r2 = 0.0;
    for (double x : point) r2 += x * x;
    if (!(r2 < 1.0) || !g->domain().contains(point)) throw ValidationError("point outside the upper-hemisphere chart");
    const double lap = function_laplacian(*g, u, point);
    const double value = u.evaluate<double>(point);
    return std::abs(lap + n * value);
}

// ---------------------------------------------------------------- registry

const std::vector<CatalogInfo>& catalog_entries()
{
    static const std::vector<CatalogInfo> entries = {
        {"berger", "frame", {{"p", "real", 1.0, "Gram entry on X2, 1 <= p <= q"}, {"q", "real", 3.5, "Gram entry on X3"}},
         "Berger metric diag(1, p, q) on SU(2)"},
        {"heisenberg", "frame", {}, "standard left-invariant metric on the Heisenberg group"},
        {"sl2r", "frame",
         {{"a", "real", 1.0, "Gram diagonal"}, {"b", "real", 1.0, "Gram diagonal"}, {"c", "real", 1.0, "Gram diagonal"}},
         "diagonal left-invariant metric on SL(2,R)"},
        {"e11", "frame",
         {{"a", "real", 1.0, "Gram diagonal"}, {"b", "real", 1.0, "Gram diagonal"}, {"c", "real", 1.0, "Gram diagonal"}},
         "diagonal left-invariant metric on E(1,1)"},
        {"hopf", "submersion", {{"n", "int", 1.0, "quaternionic dimension, 1..16"}, {"t", "real", 1.0, "fiber scale"}},
         "canonical variation of S^{4n+3} -> HP^n"},
        {"cp", "submersion", {{"n", "int", 1.0, "quaternionic dimension, 1..16"}, {"t", "real", 1.0, "fiber scale"}},
         "canonical variation of CP^{2n+1} -> HP^n"},
        {"product", "chart",
         {{"n", "int", 2.0, "sphere dimension"}, {"m", "int", 2.0, "hyperbolic dimension"},
          {"lambda", "real", 1.0, "hyperbolic scale, >= 1"}},
         "S^n x (H^m, lambda g)"},
        {"sphere", "chart", {{"n", "int", 2.0, "dimension, 2..8"}}, "unit sphere, stereographic chart"},
        {"hyperbolic", "chart", {{"m", "int", 2.0, "dimension, 2..8"}}, "hyperbolic space, Poincare ball chart"},
        {"torus", "chart", {{"n", "int", 2.0, "dimension, 1..8"}}, "flat torus"},
        {"hemisphere", "chart", {{"n", "int", 2.0, "dimension, 2..4"}},
         "upper hemisphere, stereographic chart from the south pole"},
    };
    return entries;
}

CatalogEntry make_catalog_entry(const std::string& name, const Params& given)
{
    const auto& entries = catalog_entries();
    const auto it = std::find_if(entries.begin(), entries.end(), [&](const CatalogInfo& e) { return e.name == name; });
    if (it == entries.end()) throw ValidationError("unknown metric '" + name + "'");

    Params p;
    for (const ParamSpec& spec : it->params)
        if (spec.default_value) p[spec.name] = *spec.default_value;
    for (const auto& [key, value] : given) {
        const auto spec = std::find_if(it->params.begin(), it->params.end(), [&](const ParamSpec& s) { return s.name == key; });
        if (spec == it->params.end()) throw ValidationError("metric '" + name + "' has no parameter '" + key + "'");
        if (!std::isfinite(value)) throw ValidationError("parameter '" + key + "' must be finite");
        if (spec->type == "int" && value != std::floor(value))
            throw ValidationError("parameter '" + key + "' must be an integer");
        p[key] = value;
    }
    auto i = [&](const char* k) { return static_cast<int>(p.at(k)); };

    std::string label = name;
    for (std::size_t k = 0; k < it->params.size(); ++k)
        label += (k ? "," : ":") + it->params[k].name + "=" + fmt(p.at(it->params[k].name));

    CatalogEntry e;
    e.name = name;
    e.label = label;
    if (name == "berger") {
        e.backend = std::make_shared<FrameBackend>(berger_metric(p["p"], p["q"]), label);
        e.reference = from_array(oracle::berger_ricci(p["p"], p["q"]));
        e.reference->scalar = oracle::berger_scalar(p["p"], p["q"]);
    } else if (name == "heisenberg") {
        e.backend = std::make_shared<FrameBackend>(make_frame_metric(heisenberg(), Matrix::Identity(3, 3)), label);
        e.reference = from_array(oracle::milnor_ricci({1, 0, 0}, {1, 1, 1}));
    } else if (name == "sl2r" || name == "e11") {
        for (const char* k : {"a", "b", "c"})
            if (!(p[k] > 0.0)) throw ValidationError("Gram diagonal entries must be positive");
        Matrix gram = Matrix::Zero(3, 3);
        gram.diagonal() << p["a"], p["b"], p["c"];
        const bool sl = name == "sl2r";
        e.backend = std::make_shared<FrameBackend>(make_frame_metric(sl ? sl2r() : e11(), gram), label);
        e.reference = from_array(oracle::milnor_ricci(sl ? std::array<double, 3>{1, 1, -1} : std::array<double, 3>{1, -1, 0},
                                                      {p["a"], p["b"], p["c"]}));
    } else if (name == "hopf" || name == "cp") {
        const int n = i("n");
        const double t = p["t"];
        const bool hopf = name == "hopf";
        auto model = hopf ? hopf_variation(n, t) : cp_variation(n, t);
        e.backend = std::make_shared<SubmersionBackend>(model, label);
        // the simplified eigenvalue displays for the two families
        const double lv = hopf ? 2 / t + 4 * n * t : 4 / t + 4 * n * t;
        const double lh = hopf ? 4 * (n + 2) - 6 * t : 4 * (n + 2) - 4 * t;
        e.reference = from_eigs(repeated({{lv, model.dim_f}, {lh, model.dim_b}}));
    } else if (name == "product") {
        e.backend = std::make_shared<ChartBackend>(product_space_form(i("n"), i("m"), p["lambda"]), label);
        e.reference = product_reference(i("n"), i("m"), p["lambda"]);
    } else if (name == "sphere" || name == "hemisphere") {
        const int n = i("n");
        if (name == "hemisphere") require_range("hemisphere dimension", n, 2, 4);
        e.backend = std::make_shared<ChartBackend>(sphere_chart(n), label);
        e.reference = from_eigs(repeated({{n - 1.0, n}}));
    } else if (name == "hyperbolic") {
        const int m = i("m");
        e.backend = std::make_shared<ChartBackend>(hyperbolic_chart(m), label);
        e.reference = from_eigs(repeated({{-(m - 1.0), m}}));
    } else if (name == "torus") {
        const int n = i("n");
        e.backend = std::make_shared<ChartBackend>(torus_chart(n), label);
        e.reference = from_eigs(repeated({{0.0, n}}));
    }
    return e;
}

double catalog_reference_check(const CatalogEntry& entry, const std::vector<Point>& points)
{
    if (!entry.reference) throw ValidationError("catalog entry '" + entry.name + "' has no reference values");
    if (points.empty()) throw ValidationError("reference check needs at least one point");
    double worst = 0.0;
    for (const Point& p : points) {
        const PointState st = entry.backend->state(p);
        worst = std::max(worst, std::abs(st.scalar - entry.reference->scalar));
        worst = std::max(worst, (st.ricci_eigs - entry.reference->ricci_eigs).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::vector<Point> halton_points(const Box& box, int count, int skip)
{
    static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    const int dim = box.dimension();
    if (dim < 1 || dim > 8) throw ValidationError("Halton points need dimension 1..8");
    if (count < 1) throw ValidationError("Halton point count must be positive");
    std::vector<Point> out;
    for (int k = skip; k < skip + count; ++k) {
        Point x(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d) {
            double f = 1.0, r = 0.0;
            for (int i = k; i > 0; i /= primes[d]) {
                f /= primes[d];
                r += f * (i % primes[d]);
            }
            x[d] = box.lower[d] + r * (box.upper[d] - box.lower[d]);
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<Point> sample_points(const GeometryBackend& backend, int count)
{
    if (backend.homogeneous()) return backend.default_points();
    const auto& chart = dynamic_cast<const ChartBackend&>(backend);
    return halton_points(chart.metric()->domain(), count);
}

}  // namespace scalrig
