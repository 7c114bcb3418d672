#include "scalrig/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "scalrig/error.hpp"
#include "scalrig/oracle.hpp"
#include "scalrig/report.hpp"
#include "scalrig/verify.hpp"

namespace scalrig {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

double parse_real(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ValidationError("expected a number for " + what + ", got '" + s + "'");
    }
    if (used != s.size()) throw ValidationError("expected a number for " + what + ", got '" + s + "'");
    if (!std::isfinite(v)) throw ValidationError(what + " must be finite");
    return v;
}

int parse_int(const std::string& s, const std::string& what)
{
    const double v = parse_real(s, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError(what + " must be an integer");
    return static_cast<int>(v);
}

[[noreturn]] void spec_error(int line, const std::string& msg)
{
    throw ValidationError("spec line " + std::to_string(line) + ": " + msg);
}

// ---------------------------------------------------------------- JSON helpers

Json to_json(const Vector& v)
{
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Json to_json(const Matrix& m)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(std::move(row));
    }
    return a;
}

Json to_json(const Point& p)
{
    Json a = Json::array();
    for (double x : p) a.push_back(x);
    return a;
}

Json to_json(const Christoffel& c)
{
    Json a = Json::array();
    for (int k = 0; k < c.size(); ++k) {
        Json mk = Json::array();
        for (int i = 0; i < c.size(); ++i) {
            Json row = Json::array();
            for (int j = 0; j < c.size(); ++j) row.push_back(c(k, i, j));
            mk.push_back(std::move(row));
        }
        a.push_back(std::move(mk));
    }
    return a;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json state_json(const PointState& st)
{
    Json j;
    j["metric"] = to_json(st.g);
    j["ricci"] = to_json(st.ric);
    j["scalar"] = st.scalar;
    j["traceless_ricci"] = to_json(st.traceless);
    j["ricci_eigs"] = to_json(st.ricci_eigs);
    j["traceless_norm_sq"] = st.traceless_norm_sq;
    j["laplacian_scalar"] = std::isnan(st.lap_scalar) ? Json(nullptr) : Json(st.lap_scalar);
    return j;
}

double trace_residual(const PointState& st)
{
    const Matrix a = st.g.ldlt().solve(st.ric);
    return std::abs(a.trace() - st.scalar);
}

double symmetry_residual(const Matrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- output

enum class Format { json, csv };

void write_json(std::ostream& out, const Json& report) { out << dump_json(report) << '\n'; }

std::string direction_name(Direction d) { return d == Direction::positive ? "pos" : "neg"; }

}  // namespace

// ---------------------------------------------------------------- spec files

MetricSpec parse_metric_spec(std::string_view text)
{
    MetricSpec spec;
    std::string section;
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, std::string>> domain_lines, component_lines, deformation_lines;
    int line_no = 0;
    bool have_dimension = false;

    std::istringstream is{std::string(text)};
    for (std::string raw; std::getline(is, raw);) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        std::istringstream words(line);
        std::string head;
        words >> head;
        if (head == "dimension") {
            std::string value, extra;
            words >> value >> extra;
            if (value.empty() || !extra.empty()) spec_error(line_no, "expected 'dimension <integer>'");
            if (have_dimension) spec_error(line_no, "dimension given twice");
            spec.dimension = parse_int(value, "dimension");
            if (spec.dimension < 1 || spec.dimension > kMaxJetVars) spec_error(line_no, "dimension must be in 1..8");
            have_dimension = true;
            section.clear();
        } else if (head == "domain" || head == "components" || head == "deformation") {
            if (line != head) spec_error(line_no, "section header '" + head + "' takes no arguments");
            section = head;
        } else if (section == "domain") {
            domain_lines.emplace_back(line_no, line);
        } else if (section == "components") {
            component_lines.emplace_back(line_no, line);
        } else if (section == "deformation") {
            deformation_lines.emplace_back(line_no, line);
        } else {
            spec_error(line_no, "unexpected '" + head + "' outside a section");
        }
    }
    if (!have_dimension) throw ValidationError("spec file has no dimension");
    const int n = spec.dimension;

    spec.domain.lower.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN());
    spec.domain.upper = spec.domain.lower;
    for (const auto& [ln, line] : domain_lines) {
        std::istringstream w(line);
        std::string var, lo, hi, extra;
        w >> var >> lo >> hi >> extra;
        if (hi.empty() || !extra.empty() || var.size() < 2 || var[0] != 'x')
            spec_error(ln, "expected 'x<i> <lower> <upper>'");
        const int i = parse_int(var.substr(1), "coordinate index");
        if (i < 1 || i > n) spec_error(ln, "coordinate " + var + " out of range for dimension " + std::to_string(n));
        if (!std::isnan(spec.domain.lower[i - 1])) spec_error(ln, "bounds for " + var + " given twice");
        spec.domain.lower[i - 1] = parse_real(lo, "lower bound");
        spec.domain.upper[i - 1] = parse_real(hi, "upper bound");
        if (!(spec.domain.lower[i - 1] < spec.domain.upper[i - 1])) spec_error(ln, "empty interval for " + var);
    }
    for (int i = 0; i < n; ++i)
        if (std::isnan(spec.domain.lower[i])) throw ValidationError("domain has no bounds for x" + std::to_string(i + 1));

    spec.lower.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i) spec.lower[i].assign(static_cast<std::size_t>(i + 1), "");
    for (const auto& [ln, line] : component_lines) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) spec_error(ln, "expected 'g_i_j = <expression>'");
        const std::string key = trim(line.substr(0, eq));
        const std::string expr = trim(line.substr(eq + 1));
        const auto parts = split(key, '_');
        if (parts.size() != 3 || parts[0] != "g") spec_error(ln, "component key must look like g_i_j");
        int i = parse_int(parts[1], "component index") - 1;
        int j = parse_int(parts[2], "component index") - 1;
        if (i < 0 || j < 0 || i >= n || j >= n) spec_error(ln, "component " + key + " out of range");
        if (j > i) std::swap(i, j);
        if (!seen.insert({i, j}).second) spec_error(ln, "component " + key + " given twice");
        if (expr.empty()) spec_error(ln, "empty expression for " + key);
        try {
            (void)parse_expression(expr, n);
        } catch (const ValidationError& e) {
            spec_error(ln, key + ": " + e.what());
        }
        spec.lower[i][j] = expr;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            if (spec.lower[i][j].empty()) {
                if (i == j) throw ValidationError("missing diagonal component g_" + std::to_string(i + 1) + "_" + std::to_string(i + 1));
                spec.lower[i][j] = "0";
            }

    if (!deformation_lines.empty()) {
        DeformationBlock d;
        bool have_s = false;
        for (const auto& [ln, line] : deformation_lines) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) spec_error(ln, "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "kind") {
                if (value != "traceless" && value != "conformal") spec_error(ln, "deformation kind must be traceless or conformal");
                d.kind = value;
            } else if (key == "s") {
                d.s = parse_real(value, "deformation s");
                have_s = true;
            } else if (key == "u") {
                try {
                    (void)parse_expression(value, n);
                } catch (const ValidationError& e) {
                    spec_error(ln, std::string("u: ") + e.what());
                }
                d.u = value;
            } else {
                spec_error(ln, "unknown deformation key '" + key + "'");
            }
        }
        if (d.kind.empty() || !have_s) throw ValidationError("deformation block needs kind and s");
        if (d.kind == "conformal" && d.u.empty()) throw ValidationError("conformal deformation needs u");
        if (d.kind == "traceless" && !d.u.empty()) throw ValidationError("traceless deformation takes no u");
        spec.deformation = d;
    }
    return spec;
}

MetricSpec load_metric_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_metric_spec(ss.str());
}

BackendPtr backend_from_spec(const MetricSpec& spec, const std::string& label)
{
    FieldPtr field = ChartMetric::from_strings(spec.dimension, spec.domain, spec.lower);
    if (spec.deformation) {
        const DeformationBlock& d = *spec.deformation;
        if (d.kind == "traceless") field = std::make_shared<TracelessDeformedField>(field, d.s);
        else field = std::make_shared<ConformalField>(field, parse_expression(d.u, spec.dimension), d.s);
    }
    return std::make_shared<ChartBackend>(field, label);
}

// ---------------------------------------------------------------- selectors

ResolvedMetric resolve_metric(const std::string& selector)
{
    const std::string sel = trim(selector);
    if (sel.empty()) throw ValidationError("empty metric selector");
    if (sel.rfind("file:", 0) == 0) {
        const std::string path = sel.substr(5);
        if (path.empty()) throw ValidationError("file selector needs a path");
        return {backend_from_spec(load_metric_spec(path), sel), sel, std::nullopt};
    }
    const auto colon = sel.find(':');
    const std::string name = sel.substr(0, colon);
    Params params;
    std::optional<double> deform_s;
    if (colon != std::string::npos) {
        for (const std::string& kv : split(sel.substr(colon + 1), ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw ValidationError("malformed selector parameter '" + kv + "'");
            const std::string key = trim(kv.substr(0, eq));
            const double value = parse_real(trim(kv.substr(eq + 1)), "parameter " + key);
            if (key == "deform") {
                if (deform_s) throw ValidationError("deform given twice");
                deform_s = value;
            } else if (!params.emplace(key, value).second) {
                throw ValidationError("parameter '" + key + "' given twice");
            }
        }
    }
    CatalogEntry e = make_catalog_entry(name, params);
    if (!deform_s || *deform_s == 0.0) return {e.backend, e.label, e.reference};

    const double s = *deform_s;
    char buf[48];
    std::snprintf(buf, sizeof buf, ",deform=%.17g", s);
    const std::string label = e.label + (e.label.find(':') == std::string::npos ? ":" + std::string(buf + 1) : buf);
    if (const auto* f = dynamic_cast<const FrameBackend*>(e.backend.get()))
        return {std::make_shared<FrameBackend>(deform_frame_metric(f->metric(), s), label), label, std::nullopt};
    if (const auto* c = dynamic_cast<const ChartBackend*>(e.backend.get()))
        return {std::make_shared<ChartBackend>(std::make_shared<TracelessDeformedField>(c->metric(), s), label), label,
                std::nullopt};
    throw ValidationError("deform= is not available for submersion models");
}

std::vector<Point> parse_points(const std::string& raw, const GeometryBackend& backend)
{
    const std::string spec = trim(raw);
    const int n = backend.dimension();
    std::vector<Point> pts;
    if (spec == "origin") {
        pts = backend.homogeneous() ? backend.default_points() : std::vector<Point>{Point(static_cast<std::size_t>(n), 0.0)};
    } else if (backend.homogeneous()) {
        throw ValidationError("homogeneous metrics take only the point set 'origin'");
    } else if (spec.rfind("grid:", 0) == 0) {
        const auto axes = split(spec.substr(5), ',');
        if (static_cast<int>(axes.size()) != n)
            throw ValidationError("grid needs one lo:hi:k triple per coordinate (" + std::to_string(n) + ")");
        std::vector<std::vector<double>> values;
        std::size_t total = 1;
        for (const std::string& axis : axes) {
            const auto f = split(axis, ':');
            if (f.size() != 3) throw ValidationError("malformed grid axis '" + axis + "', expected lo:hi:k");
            const double lo = parse_real(f[0], "grid lower bound");
            const double hi = parse_real(f[1], "grid upper bound");
            const int k = parse_int(f[2], "grid count");
            if (k < 1 || k > 1000) throw ValidationError("grid count must be in 1..1000");
            if (hi < lo) throw ValidationError("grid upper bound below lower bound");
            std::vector<double> v;
            for (int i = 0; i < k; ++i) v.push_back(k == 1 ? lo : lo + (hi - lo) * i / (k - 1));
            total *= v.size();
            if (total > 100000) throw ValidationError("grid has too many points");
            values.push_back(std::move(v));
        }
        std::vector<std::size_t> idx(values.size(), 0);
        for (std::size_t c = 0; c < total; ++c) {
            Point p;
            for (std::size_t d = 0; d < values.size(); ++d) p.push_back(values[d][idx[d]]);
            pts.push_back(std::move(p));
            for (std::size_t d = values.size(); d-- > 0;) {
                if (++idx[d] < values[d].size()) break;
                idx[d] = 0;
            }
        }
    } else if (spec.rfind("list:", 0) == 0) {
        for (const std::string& item : split(spec.substr(5), ';')) {
            Point p;
            for (const std::string& c : split(item, ',')) p.push_back(parse_real(c, "point coordinate"));
            pts.push_back(std::move(p));
        }
    } else if (spec.rfind("halton:", 0) == 0) {
        const int count = parse_int(spec.substr(7), "point count");
        if (count < 1 || count > 10000) throw ValidationError("halton count must be in 1..10000");
        pts = sample_points(backend, count);
    } else {
        throw ValidationError("malformed point set '" + spec + "' (expected origin, grid:, list: or halton:)");
    }
    for (const Point& p : pts) backend.check_point(p);
    return pts;
}

// ---------------------------------------------------------------- commands

namespace {

struct Options {
    std::string metric, g0, g, points = "origin", point = "origin", direction = "pos", suite, format = "json", u,
                algebra, grid = "0.5,1,2", family = "hopf";
    int theorem = 1, steps = 12, hypothesis = 1, n = 1, samples = 6;
    double s_max = 1.0, s = 0.0;
    std::optional<double> t;
    std::uint64_t seed = 0;
    bool laplacian = false;
};

Format format_of(const std::string& f)
{
    if (f == "json") return Format::json;
    if (f == "csv") return Format::csv;
    throw ValidationError("format must be json or csv");
}

Direction direction_of(const std::string& d)
{
    if (d == "pos") return Direction::positive;
    if (d == "neg") return Direction::negative;
    throw ValidationError("direction must be pos or neg");
}

int cmd_catalog(const Options& o, std::ostream& out)
{
    const Format fmt = format_of(o.format);
    if (fmt == Format::csv) {
        out << "name,backend,parameter,type,default\n";
        for (const auto& e : catalog_entries()) {
            if (e.params.empty()) out << e.name << ',' << e.backend << ",,,\n";
            for (const auto& p : e.params)
                out << e.name << ',' << e.backend << ',' << p.name << ',' << p.type << ','
                    << (p.default_value ? csv_number(*p.default_value) : "") << '\n';
        }
        return kExitOk;
    }
    Json list = Json::array();
    for (const auto& e : catalog_entries()) {
        Json j;
        j["name"] = e.name;
        j["backend"] = e.backend;
        j["description"] = e.description;
        j["has_reference"] = e.has_reference;
        Json params = Json::array();
        for (const auto& p : e.params) {
            Json pj;
            pj["name"] = p.name;
            pj["type"] = p.type;
            pj["default"] = optional_number(p.default_value);
            pj["description"] = p.description;
            params.push_back(std::move(pj));
        }
        j["params"] = std::move(params);
        list.push_back(std::move(j));
    }
    Json results;
    results["entries"] = std::move(list);
    Json extra;
    extra["file"] = "file:<path> reads a metric spec file";
    extra["deform"] = "append deform=<s> to any catalog selector for g - s Ric°";
    results["selectors"] = std::move(extra);
    write_json(out, make_report("catalog", Json::object(), std::move(results), Json::object()));
    return kExitOk;
}

int cmd_curvature(const Options& o, std::ostream& out)
{
    const Format fmt = format_of(o.format);
    const ResolvedMetric m = resolve_metric(o.metric);
    Point pt;
    if (o.point == "origin") pt = parse_points("origin", *m.backend).front();
    else if (m.backend->homogeneous()) throw ValidationError("homogeneous metrics take only the point 'origin'");
    else
        for (const std::string& c : split(o.point, ',')) pt.push_back(parse_real(c, "point coordinate"));
    m.backend->check_point(pt);

    PointState st;
    std::optional<Christoffel> gamma;
    if (const auto* c = dynamic_cast<const ChartBackend*>(m.backend.get())) {
        const CurvatureReport rep = c->report(pt, o.laplacian);
        st = make_state(rep);
        gamma = rep.christoffel;
    } else if (const auto* f = dynamic_cast<const FrameBackend*>(m.backend.get())) {
        const CurvatureReport rep = frame_curvature(f->metric());
        st = make_state(rep);
        gamma = rep.christoffel;
    } else {
        st = m.backend->state(pt);
    }
    if (!o.laplacian && !m.backend->homogeneous()) st.lap_scalar = std::numeric_limits<double>::quiet_NaN();

    if (fmt == Format::csv) {
        out << "field,i,j,value\n";
        const int n = st.n;
        auto mat = [&](const char* name, const Matrix& a) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out << name << ',' << i + 1 << ',' << j + 1 << ',' << csv_number(a(i, j)) << '\n';
        };
        mat("metric", st.g);
        mat("ricci", st.ric);
        mat("traceless_ricci", st.traceless);
        for (int i = 0; i < n; ++i) out << "ricci_eig," << i + 1 << ",," << csv_number(st.ricci_eigs(i)) << '\n';
        out << "scalar,,," << csv_number(st.scalar) << '\n';
        out << "traceless_norm_sq,,," << csv_number(st.traceless_norm_sq) << '\n';
        if (!std::isnan(st.lap_scalar)) out << "laplacian_scalar,,," << csv_number(st.lap_scalar) << '\n';
        return kExitOk;
    }
    Json inputs;
    inputs["metric"] = m.label;
    inputs["point"] = to_json(pt);
    inputs["laplacian"] = o.laplacian;
    Json results = state_json(st);
    results["backend"] = m.backend->kind();
    results["point"] = to_json(pt);
    if (gamma) results["christoffel"] = to_json(*gamma);
    if (m.reference) {
        Json ref;
        ref["ricci_eigs"] = to_json(m.reference->ricci_eigs);
        ref["scalar"] = m.reference->scalar;
        results["reference"] = std::move(ref);
    }
    Json residuals;
    residuals["ricci_symmetry"] = symmetry_residual(st.ric);
    residuals["trace_identity"] = trace_residual(st);
    if (m.reference) {
        residuals["reference_scalar"] = std::abs(st.scalar - m.reference->scalar);
        residuals["reference_eigs"] = (st.ricci_eigs - m.reference->ricci_eigs).cwiseAbs().maxCoeff();
    }
    write_json(out, make_report("curvature", std::move(inputs), std::move(results), std::move(residuals)));
    return kExitOk;
}

double margin_scale(const PointState& st, Theorem t)
{
    const double base = std::max({st.scalar * st.scalar, st.traceless_norm_sq,
                                  std::isnan(st.lap_scalar) ? 0.0 : std::abs(st.lap_scalar)});
    return t == Theorem::T4 ? base * std::max(1.0, std::abs(st.scalar)) : base;
}

int cmd_check(const Options& o, std::ostream& out)
{
    const Format fmt = format_of(o.format);
    const Theorem th = theorem_from_int(o.theorem);
    const ResolvedMetric m = resolve_metric(o.metric);
    const auto pts = parse_points(o.points, *m.backend);

    Json rows = Json::array();
    bool all_pos = true, all_neg = true;
    if (fmt == Format::csv) out << "point_id,positive,negative,holds_pos,holds_neg\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const PointState st = m.backend->state(pts[i]);
        const AssumptionMargin a = assumption_margin(st, th);
        const double tol = strict_tolerance(margin_scale(st, th));
        const bool hp = a.positive > tol, hn = a.negative > tol;
        all_pos = all_pos && hp;
        all_neg = all_neg && hn;
        if (fmt == Format::csv) {
            out << i << ',' << csv_number(a.positive) << ',' << csv_number(a.negative) << ',' << hp << ',' << hn << '\n';
            continue;
        }
        Json r;
        r["point_id"] = i;
        r["point"] = to_json(pts[i]);
        r["margin"] = a.positive;
        r["positive"] = a.positive;
        r["negative"] = a.negative;
        r["holds_pos"] = hp;
        r["holds_neg"] = hn;
        if (th == Theorem::T2) {
            r["lambda_min_branch"] = a.lambda_min_branch;
            r["lambda_max_branch"] = a.lambda_max_branch;
            r["pairing"] = a.pairing;
        }
        r["scalar"] = st.scalar;
        r["laplacian_scalar"] = st.lap_scalar;
        r["traceless_norm_sq"] = st.traceless_norm_sq;
        r["ricci_eigs"] = to_json(st.ricci_eigs);
        r["einstein"] = st.traceless_norm_sq <= strict_tolerance(st.scalar * st.scalar);
        rows.push_back(std::move(r));
    }
    if (fmt == Format::csv) return kExitOk;
    Json inputs;
    inputs["theorem"] = to_string(th);
    inputs["metric"] = m.label;
    inputs["points"] = o.points;
    Json results;
    results["points"] = std::move(rows);
    results["assumption_holds_pos"] = all_pos;
    results["assumption_holds_neg"] = all_neg;
    write_json(out, make_report("check", std::move(inputs), std::move(results), Json::object()));
    return kExitOk;
}

int cmd_scan(const Options& o, std::ostream& out)
{
    const Format fmt = format_of(o.format);
    const Theorem th = theorem_from_int(o.theorem);
    const Direction dir = direction_of(o.direction);
    const ResolvedMetric m = resolve_metric(o.metric);
    const auto pts = parse_points(o.points, *m.backend);
    const ScanResult r = scan_s(*m.backend, pts, th, dir, o.s_max, o.steps);

    if (fmt == Format::csv) {
        out << "s,point_id,margin,spd_ok\n";
        for (std::size_t k = 0; k < r.s_grid.size(); ++k)
            for (std::size_t i = 0; i < pts.size(); ++i)
                out << csv_number(r.s_grid[k]) << ',' << i << ',' << csv_number(r.margins[k][i]) << ','
                    << (r.spd_ok[k][i] ? 1 : 0) << '\n';
        return kExitOk;
    }
    Json inputs;
    inputs["theorem"] = to_string(th);
    inputs["metric"] = m.label;
    inputs["direction"] = direction_name(dir);
    inputs["s_max"] = o.s_max;
    inputs["steps"] = o.steps;
    inputs["points"] = o.points;

    Json results;
    results["theorem"] = to_string(th);
    results["direction"] = direction_name(dir);
    results["s_grid"] = r.s_grid;
    results["spd_limit"] = optional_number(r.spd_limit);
    results["degenerate"] = r.degenerate;
    if (r.admissible) results["admissible"] = Json::array({r.admissible->first, r.admissible->second});
    else results["admissible"] = nullptr;
    Json plist = Json::array();
    for (const Point& p : pts) plist.push_back(to_json(p));
    results["points"] = std::move(plist);
    results["margins"] = r.margins;
    Json ok = Json::array();
    for (const auto& row : r.spd_ok) {
        Json jr = Json::array();
        for (bool b : row) jr.push_back(b);
        ok.push_back(std::move(jr));
    }
    results["spd_ok"] = std::move(ok);
    results["slope_at_zero"] = r.slope_at_zero;
    results["assumption_margin"] = r.assumption;
    if (r.degenerate) results["note"] = "deformation degenerate: traceless Ricci vanishes, g_s = g";

    Json residuals;
    Json rel = Json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double a = r.assumption[i];
        rel.push_back(std::abs(a) > 0 ? std::abs(r.slope_at_zero[i] - a) / std::abs(a) : std::abs(r.slope_at_zero[i]));
    }
    residuals["slope_vs_assumption_relative"] = std::move(rel);
    write_json(out, make_report("scan", std::move(inputs), std::move(results), std::move(residuals)));
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const Format fmt = format_of(o.format);
    const SuiteResult r = run_suite(o.suite, o.seed);
    if (fmt == Format::csv) {
        out << "check,value,threshold,comparison,samples,passed\n";
        for (const Check& c : r.checks)
            out << c.name << ',' << csv_number(c.value) << ',' << csv_number(c.threshold) << ',' << (c.at_most ? "<=" : ">=")
                << ',' << c.samples << ',' << c.passed() << '\n';
        return r.passed() ? kExitOk : kExitSuiteFailure;
    }
    Json inputs;
    inputs["suite"] = r.suite;
    inputs["seed"] = r.seed;
    Json checks = Json::array();
    Json residuals;
    for (const Check& c : r.checks) {
        Json j;
        j["name"] = c.name;
        j["value"] = c.value;
        j["threshold"] = c.threshold;
        j["comparison"] = c.at_most ? "<=" : ">=";
        j["samples"] = c.samples;
        j["passed"] = c.passed();
        checks.push_back(std::move(j));
        residuals[c.name] = c.value;
    }
    Json results;
    results["passed"] = r.passed();
    results["checks"] = std::move(checks);
    write_json(out, make_report("verify", std::move(inputs), std::move(results), std::move(residuals)));
    return r.passed() ? kExitOk : kExitSuiteFailure;
}

struct PairedStates {
    ResolvedMetric g0, g;
    std::vector<Point> points;
    std::vector<PointState> s0, s;
};

PairedStates paired(const Options& o)
{
    PairedStates p{resolve_metric(o.g0), resolve_metric(o.g), {}, {}, {}};
    if (p.g0.backend->dimension() != p.g.backend->dimension()) throw ValidationError("g0 and g differ in dimension");
    if (p.g0.backend->homogeneous() != p.g.backend->homogeneous())
        throw ValidationError("g0 and g must both be chart metrics or both homogeneous");
    p.points = parse_points(o.points, *p.g0.backend);
    for (const Point& x : p.points) {
        p.g.backend->check_point(x);
        p.s0.push_back(p.g0.backend->state(x));
        p.s.push_back(p.g.backend->state(x));
    }
    return p;
}

int cmd_functional(const Options& o, std::ostream& out)
{
    const PairedStates p = paired(o);
    const RemarkFunctionals f = remark_functionals(p.s0, p.s);
    Json inputs;
    inputs["g0"] = p.g0.label;
    inputs["g"] = p.g.label;
    inputs["points"] = o.points;
    Json results;
    results["F1"] = f.f1;
    results["F2"] = f.f2;
    results["Rmin"] = f.r_min;
    results["samples"] = p.points.size();
    Json residuals;
    residuals["F1_minus_Rmin"] = f.f1 - f.r_min;
    residuals["F2_minus_Rmin"] = f.f2 - f.r_min;
    write_json(out, make_report("functional", std::move(inputs), std::move(results), std::move(residuals)));
    return kExitOk;
}

int cmd_hypothesis(const Options& o, std::ostream& out)
{
    const Hypothesis kind = hypothesis_from_int(o.hypothesis);
    const PairedStates p = paired(o);
    const HypothesisResult h = rigidity_hypothesis(p.s0, p.s, kind);
    Json inputs;
    inputs["kind"] = "D" + std::to_string(o.hypothesis);
    inputs["g0"] = p.g0.label;
    inputs["g"] = p.g.label;
    inputs["points"] = o.points;
    Json rows = Json::array();
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        Json r;
        r["point_id"] = i;
        r["point"] = to_json(p.points[i]);
        r["margin"] = h.margins[i];
        r["holds"] = static_cast<bool>(h.holds[i]);
        r["scalar_g0"] = p.s0[i].scalar;
        r["scalar_g"] = p.s[i].scalar;
        rows.push_back(std::move(r));
    }
    Json results;
    results["points"] = std::move(rows);
    results["holds_everywhere"] = std::all_of(h.holds.begin(), h.holds.end(), [](bool b) { return b; });
    write_json(out, make_report("hypothesis", std::move(inputs), std::move(results), Json::object()));
    return kExitOk;
}

int cmd_conformal(const Options& o, std::ostream& out)
{
    const ResolvedMetric m = resolve_metric(o.metric);
    const auto pts = parse_points(o.points, *m.backend);
    const Expression u = parse_expression(o.u, m.backend->dimension());
    const ConformalResult r = conformal_deform(*m.backend, u, o.s, pts, o.samples);
    Json inputs;
    inputs["metric"] = m.label;
    inputs["u"] = o.u;
    inputs["s"] = o.s;
    inputs["points"] = o.points;
    Json rows = Json::array();
    Json slopes = Json::array();
    for (const ConformalPoint& c : r.points) {
        Json j;
        j["point"] = to_json(c.point);
        j["u"] = c.u;
        j["laplacian_u"] = c.laplacian_u;
        j["gradient_sq"] = c.gradient_sq;
        j["scalar"] = c.scalar;
        j["deformed_scalar"] = c.deformed_scalar;
        j["first_order_term"] = c.first_order;
        j["sigma"] = c.sigma;
        j["residual"] = c.residual;
        j["slope"] = c.slope;
        j["second_order_empirical"] = c.second_order_empirical;
        j["second_order_conformal_law"] = c.second_order_conformal_law;
        j["second_order_stated_expression"] = optional_number(c.second_order_stated);
        slopes.push_back(c.slope);
        rows.push_back(std::move(j));
    }
    Json results;
    results["points"] = std::move(rows);
    results["sigma"] = r.sigma;
    results["max_residual"] = r.max_residual;
    Json residuals;
    residuals["slope"] = r.slope;
    residuals["point_slopes"] = std::move(slopes);
    write_json(out, make_report("conformal", std::move(inputs), std::move(results), std::move(residuals)));
    return kExitOk;
}

int cmd_signature(const Options& o, std::ostream& out)
{
    LieAlgebraData alg;
    if (o.algebra == "sl2r") alg = sl2r();
    else if (o.algebra == "e11") alg = e11();
    else if (o.algebra == "heisenberg") alg = heisenberg();
    else if (o.algebra == "su2") alg = su2();
    else throw ValidationError("algebra must be su2, heisenberg, sl2r or e11");
    std::vector<double> grid;
    for (const std::string& v : split(o.grid, ',')) grid.push_back(parse_real(v, "grid value"));
    const SignatureScan scan = signature_scan(alg, grid);
    Json inputs;
    inputs["algebra"] = o.algebra;
    inputs["grid"] = grid;
    Json samples = Json::array();
    for (const auto& s : scan.samples) {
        Json j;
        j["gram_diagonal"] = Json::array({s.gram_diagonal[0], s.gram_diagonal[1], s.gram_diagonal[2]});
        j["ricci_eigs"] = to_json(s.ricci_eigs);
        j["signature"] = s.signature;
        samples.push_back(std::move(j));
    }
    Json results;
    results["signatures_found"] = scan.found;
    results["samples"] = std::move(samples);
    write_json(out, make_report("signature", std::move(inputs), std::move(results), Json::object()));
    return kExitOk;
}

int cmd_variation(const Options& o, std::ostream& out)
{
    if (o.family != "hopf" && o.family != "cp") throw ValidationError("family must be hopf or cp");
    const bool hopf = o.family == "hopf";
    const double t = o.t.value_or(1.0);
    const CanonicalVariationModel m = hopf ? hopf_variation(o.n, t) : cp_variation(o.n, t);
    const VariationCurvature c = variation_curvature(m);
    const VariationMargins vm = variation_assumption_margins(m);
    const auto roots = einstein_parameters(m);

    Json inputs;
    inputs["family"] = o.family;
    inputs["n"] = o.n;
    inputs["t"] = t;
    Json results;
    results["dim_f"] = m.dim_f;
    results["dim_b"] = m.dim_b;
    results["lambda_v"] = c.lambda_v;
    results["lambda_h"] = c.lambda_h;
    results["scalar"] = c.scalar;
    results["traceless_norm_sq"] = c.traceless_norm_sq;
    results["ordering"] = eigenvalue_ordering(c);
    results["einstein_parameters"] = roots;
    Json margins;
    for (const AssumptionMargin* a : {&vm.t1, &vm.t2, &vm.t3, &vm.t4}) {
        Json j;
        j["positive"] = a->positive;
        j["negative"] = a->negative;
        margins[to_string(a->theorem)] = std::move(j);
    }
    results["assumption_margins"] = std::move(margins);

    Json residuals;
    const double expanded = hopf ? oracle::hopf_traceless_norm_sq(o.n, t) : oracle::cp_traceless_norm_sq(o.n, t);
    const double collected =
        hopf ? oracle::hopf_traceless_norm_sq_collected(o.n, t) : oracle::cp_traceless_norm_sq_collected(o.n, t);
    residuals["traceless_norm_vs_closed_display"] = std::abs(expanded - c.traceless_norm_sq) / std::max(1.0, c.traceless_norm_sq);
    residuals["traceless_norm_vs_collected_display"] =
        std::abs(collected - c.traceless_norm_sq) / std::max(1.0, c.traceless_norm_sq);
    residuals["trace_identity"] = std::abs(m.dim_f * c.lambda_v + m.dim_b * c.lambda_h - c.scalar);
    Json root_res = Json::array();
    for (double r : roots) {
        CanonicalVariationModel at = m;
        at.t = r;
        const VariationCurvature cr = variation_curvature(at);
        root_res.push_back(std::abs(cr.lambda_v - cr.lambda_h));
    }
    residuals["einstein_substitution"] = std::move(root_res);
    write_json(out, make_report("variation", std::move(inputs), std::move(results), std::move(residuals)));
    return kExitOk;
}

int cmd_reference(const Options& o, std::ostream& out)
{
    const std::string sel = trim(o.metric);
    const auto colon = sel.find(':');
    if (sel.rfind("file:", 0) == 0) throw ValidationError("spec files carry no reference values");
    Params params;
    if (colon != std::string::npos)
        for (const std::string& kv : split(sel.substr(colon + 1), ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ValidationError("malformed selector parameter '" + kv + "'");
            const std::string key = trim(kv.substr(0, eq));
            if (key == "deform") throw ValidationError("deformed metrics carry no reference values");
            params[key] = parse_real(trim(kv.substr(eq + 1)), "parameter " + key);
        }
    const CatalogEntry e = make_catalog_entry(sel.substr(0, colon), params);
    const auto pts = o.points == "origin" && !e.backend->homogeneous() ? sample_points(*e.backend)
                                                                        : parse_points(o.points, *e.backend);
    const double dev = catalog_reference_check(e, pts);
    Json inputs;
    inputs["metric"] = e.label;
    inputs["points"] = o.points == "origin" && !e.backend->homogeneous() ? std::string("halton:10") : o.points;
    Json results;
    results["ricci_eigs"] = to_json(e.reference->ricci_eigs);
    results["scalar"] = e.reference->scalar;
    results["samples"] = pts.size();
    Json residuals;
    residuals["max_deviation"] = dev;
    write_json(out, make_report("reference", std::move(inputs), std::move(results), std::move(residuals)));
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"scalrig: scalar-curvature rigidity checks for traceless-Ricci deformations", "scalrig"};
    app.require_subcommand(1);
    Options o;

    auto metric_opt = [&](CLI::App* sub) { sub->add_option("--metric", o.metric, "metric selector")->required(); };
    auto points_opt = [&](CLI::App* sub) { sub->add_option("--points", o.points, "origin | grid:lo:hi:k,... | list:a,b;c,d | halton:N"); };
    auto format_opt = [&](CLI::App* sub) { sub->add_option("--format", o.format, "json or csv"); };

    auto* catalog = app.add_subcommand("catalog", "list catalog metrics and their parameters");
    format_opt(catalog);

    auto* curvature = app.add_subcommand("curvature", "curvature report at one point");
    metric_opt(curvature);
    curvature->add_option("--point", o.point, "comma-separated coordinates or origin");
    curvature->add_flag("--laplacian", o.laplacian, "also compute the Laplacian of R");
    format_opt(curvature);

    auto* check = app.add_subcommand("check", "assumption margins per point");
    check->add_option("--theorem", o.theorem, "1, 2, 3 or 4")->required();
    metric_opt(check);
    points_opt(check);
    format_opt(check);

    auto* scan = app.add_subcommand("scan", "conclusion margins along g - s Ric°");
    scan->add_option("--theorem", o.theorem, "1, 2, 3 or 4")->required();
    metric_opt(scan);
    scan->add_option("--direction", o.direction, "pos or neg");
    scan->add_option("--s-max", o.s_max, "largest |s|");
    scan->add_option("--steps", o.steps, "number of grid values");
    points_opt(scan);
    format_opt(scan);

    auto* verify = app.add_subcommand("verify", "randomized property suites");
    verify->add_option("--suite", o.suite, "appendix, expansion, conformal or norms")->required();
    verify->add_option("--seed", o.seed, "RNG seed");
    format_opt(verify);

    auto* functional = app.add_subcommand("functional", "sampled F1, F2 and minimum scalar curvature");
    functional->add_option("--g0", o.g0, "reference metric")->required();
    functional->add_option("--g", o.g, "compared metric")->required();
    points_opt(functional);

    auto* hypothesis = app.add_subcommand("hypothesis", "rigidity hypotheses D1..D4 per point");
    hypothesis->add_option("--kind", o.hypothesis, "1, 2, 3 or 4")->required();
    hypothesis->add_option("--g0", o.g0, "reference metric")->required();
    hypothesis->add_option("--g", o.g, "compared metric")->required();
    points_opt(hypothesis);

    auto* conformal = app.add_subcommand("conformal", "first- and second-order check of (1 + s u) g");
    metric_opt(conformal);
    conformal->add_option("--u", o.u, "scalar expression in x1..xn")->required();
    conformal->add_option("--s", o.s, "deformation parameter")->required();
    conformal->add_option("--samples", o.samples, "number of halved parameters");
    points_opt(conformal);

    auto* signature = app.add_subcommand("signature", "Ricci signatures of diagonal left-invariant metrics");
    signature->add_option("--algebra", o.algebra, "su2, heisenberg, sl2r or e11")->required();
    signature->add_option("--grid", o.grid, "comma-separated Gram diagonal values");

    auto* variation = app.add_subcommand("variation", "canonical variation summary");
    variation->add_option("--family", o.family, "hopf or cp");
    variation->add_option("--n", o.n, "family index");
    variation->add_option("--t", o.t, "fiber scale");

    auto* reference = app.add_subcommand("reference", "deviation from closed-form reference curvature");
    metric_opt(reference);
    points_opt(reference);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    }

    try {
        if (catalog->parsed()) return cmd_catalog(o, out);
        if (curvature->parsed()) return cmd_curvature(o, out);
        if (check->parsed()) return cmd_check(o, out);
        if (scan->parsed()) return cmd_scan(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
        if (functional->parsed()) return cmd_functional(o, out);
        if (hypothesis->parsed()) return cmd_hypothesis(o, out);
        if (conformal->parsed()) return cmd_conformal(o, out);
        if (signature->parsed()) return cmd_signature(o, out);
        if (variation->parsed()) return cmd_variation(o, out);
        if (reference->parsed()) return cmd_reference(o, out);
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << '\n';
        return kExitGeometry;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace scalrig
