#include "scalrig/listing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scalrig/error.hpp"

namespace scalrig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void throw_outside_cone(double s, const SpdInterval& b)
{
    std::ostringstream msg;
    msg.precision(17);
    msg << "deformation s = " << s << " leaves the positive definite cone; admissible s in (" << b.lower << ", " << b.upper
        << ")";
    throw GeometryError(msg.str(), b.lower, b.upper);
}

void require_empty_point(std::span<const double> point)
{
    if (!point.empty()) throw ValidationError("homogeneous metrics take only the point 'origin'");
}

Vector traceless_eigs(const PointState& st) { return st.ricci_eigs.array() - st.scalar / st.n; }

}  // namespace

// ---------------------------------------------------------------- backends

ChartBackend::ChartBackend(FieldPtr metric, std::string label) : metric_(std::move(metric)), label_(std::move(label))
{
    if (!metric_) throw ValidationError("null metric");
}

std::vector<Point> ChartBackend::default_points() const { return {metric_->domain().center()}; }

void ChartBackend::check_point(std::span<const double> point) const
{
    if (static_cast<int>(point.size()) != dimension())
        throw ValidationError("point has " + std::to_string(point.size()) + " coordinates, metric dimension is " +
                              std::to_string(dimension()));
    if (!metric_->domain().contains(point)) throw ValidationError("point outside the metric domain");
}

CurvatureReport ChartBackend::report(std::span<const double> point, bool with_laplacian) const
{
    check_point(point);
    return curvature_report(*metric_, point, with_laplacian && metric_->max_order() >= 4);
}

PointState ChartBackend::state(std::span<const double> point) const { return make_state(report(point, true)); }

PointState ChartBackend::deformed_state(std::span<const double> point, double s) const
{
    check_point(point);
    if (s == 0.0) return make_state(report(point, false));
    const PointState base = make_state(report(point, false));
    const SpdInterval b = spd_interval(base.g, base.traceless);
    if (!b.contains(s)) throw_outside_cone(s, b);
    const TracelessDeformedField deformed(metric_, s);
    return make_state(curvature_report(deformed, point, false));
}

FrameBackend::FrameBackend(FrameMetric metric, std::string label) : metric_(std::move(metric)), label_(std::move(label))
{
    metric_.algebra.validate();
    require_spd(metric_.gram, "Gram matrix");
}

void FrameBackend::check_point(std::span<const double> point) const { require_empty_point(point); }

PointState FrameBackend::state(std::span<const double> point) const
{
    require_empty_point(point);
    return make_state(frame_curvature(metric_));
}

PointState FrameBackend::deformed_state(std::span<const double> point, double s) const
{
    require_empty_point(point);
    return make_state(frame_curvature(deform_frame_metric(metric_, s)));
}

SubmersionBackend::SubmersionBackend(CanonicalVariationModel model, std::string label)
    : model_(std::move(model)), label_(std::move(label))
{
    model_.validate();
}

void SubmersionBackend::check_point(std::span<const double> point) const { require_empty_point(point); }

PointState SubmersionBackend::state(std::span<const double> point) const
{
    require_empty_point(point);
    return variation_state(model_);
}

PointState SubmersionBackend::deformed_state(std::span<const double> point, double s) const
{
    require_empty_point(point);
    return deformed_variation_state(model_, s);
}

// ---------------------------------------------------------------- deformation and norms

Deformation deform(const PointState& st, double s)
{
    if (!std::isfinite(s)) throw ValidationError("deformation parameter must be finite");
    Deformation d;
    d.bounds = spd_interval(st.g, st.traceless);
    if (s != 0.0 && !d.bounds.contains(s)) throw_outside_cone(s, d.bounds);
    d.g_s = s == 0.0 ? st.g : symmetrized(st.g - s * st.traceless);
    d.shifts = 1.0 - s * traceless_eigs(st).array();
    if (!is_spd(d.g_s)) throw_outside_cone(s, d.bounds);
    return d;
}

double norm1(const Matrix& a, const Matrix& b)
{
    require_spd(a, "first norm argument");
    const Vector nu = pencil_eigenvalues(a, b);
    return std::sqrt(nu(nu.size() - 1));
}

double norm2(const Matrix& a, const Matrix& b)
{
    if (a.rows() < 2) throw ValidationError("the 2-vector norm needs dimension >= 2");
    require_spd(a, "first norm argument");
    const Vector nu = pencil_eigenvalues(a, b);
    const auto n = nu.size();
    return std::sqrt(nu(n - 1) * nu(n - 2));
}

// ---------------------------------------------------------------- conclusions

double conclusion_margin(const PointState& base, const PointState& deformed, double s, Theorem theorem)
{
    if (s == 0.0) return 0.0;
    const double R = base.scalar;
    const double Rs = deformed.scalar;
    const int n = base.n;
    switch (theorem) {
    case Theorem::T1: {
        const double k = norm1(base.g, deformed.g);
        return Rs - R * k * k;
    }
    case Theorem::T2: return Rs - R * norm2(base.g, deformed.g);
    case Theorem::T3: {
        const Vector e = pencil_eigenvalues(Rs * deformed.g - R * base.g, base.g);
        return s > 0 ? e(0) : e(n - 1);
    }
    case Theorem::T4: {
        const Vector nu = pencil_eigenvalues(deformed.g, base.g);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = Rs * Rs * nu(i) * nu(j) - R * R;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        return s > 0 ? lo : hi;
    }
    }
    return kNaN;
}

double conclusion_margin(const GeometryBackend& backend, std::span<const double> point, double s, Theorem theorem)
{
    backend.check_point(point);
    if (s == 0.0) return 0.0;
    const PointState base = backend.state(point);
    return conclusion_margin(base, backend.deformed_state(point, s), s, theorem);
}

double conclusion_slope(const GeometryBackend& backend, std::span<const double> point, Theorem theorem,
                        Direction direction, double h)
{
    if (!(h > 0.0)) throw ValidationError("difference step must be positive");
    const PointState base = backend.state(point);
    const int n = base.n;
    const double R = base.scalar;
    const Vector mu = traceless_eigs(base);  // ascending
    const double rp = backend.deformed_state(point, h).scalar;
    const double rm = backend.deformed_state(point, -h).scalar;
    const bool pos = direction == Direction::positive;

    // f(s, Rs) for one eigen-direction (or pair); nu_i(s) = 1 - s mu_i are the pencil
    // eigenvalues of (g_s, g) along the simultaneous eigenbasis.
    auto diff = [&](auto f) { return (f(h, rp) - f(-h, rm)) / (2.0 * h); };

    switch (theorem) {
    case Theorem::T1: {
        const double m = pos ? mu(n - 1) : mu(0);
        return diff([&](double s, double Rs) { return Rs - R / (1.0 - s * m); });
    }
    case Theorem::T2: {
        if (n < 2) throw ValidationError("the 2-vector norm needs dimension >= 2");
        const double a = pos ? mu(n - 1) : mu(0);
        const double b = pos ? mu(n - 2) : mu(1);
        return diff([&](double s, double Rs) { return Rs - R / std::sqrt((1.0 - s * a) * (1.0 - s * b)); });
    }
    case Theorem::T3: {
        // One-sided derivative of min_i (s > 0) or max_i (s < 0) is min_i of the derivatives.
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            best = std::min(best, diff([&](double s, double Rs) { return Rs * (1.0 - s * mu(i)) - R; }));
        return best;
    }
    case Theorem::T4: {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                best = std::min(best, diff([&](double s, double Rs) {
                                    return Rs * Rs * (1.0 - s * mu(i)) * (1.0 - s * mu(j)) - R * R;
                                }));
        return best;
    }
    }
    return kNaN;
}

// ---------------------------------------------------------------- scans

ScanResult scan_s(const GeometryBackend& backend, const std::vector<Point>& points, Theorem theorem, Direction direction,
                  double s_max, int steps)
{
    if (points.empty()) throw ValidationError("scan needs at least one point");
    if (steps < 2) throw ValidationError("scan needs at least 2 steps");
    if (steps > 60) throw ValidationError("scan supports at most 60 steps");
    if (!(s_max > 0.0) || !std::isfinite(s_max)) throw ValidationError("s-max must be positive");
    for (const Point& p : points) backend.check_point(p);

    const bool pos = direction == Direction::positive;
    ScanResult out;
    out.theorem = theorem;
    out.direction = direction;
    out.points = points;

    std::vector<PointState> base;
    double limit = std::numeric_limits<double>::infinity();
    for (const Point& p : points) {
        base.push_back(backend.state(p));
        const SpdInterval b = spd_interval(base.back().g, base.back().traceless);
        limit = std::min(limit, pos ? b.upper : -b.lower);
    }
    if (std::isfinite(limit)) out.spd_limit = limit;

    const bool truncated = limit <= s_max;
    const double top = truncated ? limit : s_max;
    const int first = truncated ? 1 : 0;
    const double sign = pos ? 1.0 : -1.0;
    for (int k = first + steps - 1; k >= first; --k) out.s_grid.push_back(sign * std::ldexp(top, -k));

    bool all_zero = true;
    for (double s : out.s_grid) {
        std::vector<double> row;
        std::vector<bool> ok;
        for (std::size_t i = 0; i < points.size(); ++i) {
            try {
                const PointState d = backend.deformed_state(points[i], s);
                const double m = conclusion_margin(base[i], d, s, theorem);
                row.push_back(m);
                ok.push_back(true);
                const double scale = theorem == Theorem::T4 ? base[i].scalar * base[i].scalar : base[i].scalar;
                if (!(std::abs(m) <= strict_tolerance(std::max(std::abs(scale), std::abs(d.scalar))))) all_zero = false;
            } catch (const GeometryError&) {
                row.push_back(kNaN);
                ok.push_back(false);
            }
        }
        out.margins.push_back(std::move(row));
        out.spd_ok.push_back(std::move(ok));
    }
    out.degenerate = all_zero;

    if (!out.degenerate) {
        std::size_t prefix = 0;
        for (; prefix < out.s_grid.size(); ++prefix) {
            bool good = true;
            for (std::size_t i = 0; i < points.size() && good; ++i) {
                const double m = out.margins[prefix][i];
                const double scale = theorem == Theorem::T4 ? base[i].scalar * base[i].scalar : base[i].scalar;
                const double tol = strict_tolerance(scale);
                good = out.spd_ok[prefix][i] && (pos ? m > tol : m < -tol);
            }
            if (!good) break;
        }
        if (prefix > 0) {
            const double s_star = out.s_grid[prefix - 1];
            out.admissible = pos ? std::make_pair(0.0, s_star) : std::make_pair(s_star, 0.0);
        }
    }

    const double h = std::min(1e-4, 0.1 * limit);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const AssumptionMargin a = assumption_margin(base[i], theorem);
        out.assumption.push_back(pos ? a.positive : a.negative);
        out.slope_at_zero.push_back(conclusion_slope(backend, points[i], theorem, direction, h));
    }
    return out;
}

// ---------------------------------------------------------------- hypotheses and functionals

Hypothesis hypothesis_from_int(int k)
{
    if (k < 1 || k > 4) throw ValidationError("hypothesis must be D1, D2, D3 or D4");
    return static_cast<Hypothesis>(k);
}

namespace {

void require_matched(const std::vector<PointState>& g0, const std::vector<PointState>& g)
{
    if (g0.empty()) throw ValidationError("empty sample set");
    if (g0.size() != g.size()) throw ValidationError("g0 and g samples differ in length");
    for (std::size_t i = 0; i < g0.size(); ++i)
        if (g0[i].n != g[i].n) throw ValidationError("g0 and g samples differ in dimension");
}

}  // namespace

HypothesisResult rigidity_hypothesis(const std::vector<PointState>& g0, const std::vector<PointState>& g, Hypothesis kind)
{
    require_matched(g0, g);
    HypothesisResult out;
    for (std::size_t i = 0; i < g0.size(); ++i) {
        const double R0 = g0[i].scalar;
        const double R = g[i].scalar;
        const int n = g0[i].n;
        double m = kNaN;
        double scale = std::max(std::abs(R0), std::abs(R));
        switch (kind) {
        case Hypothesis::D1: {
            const double k = norm1(g0[i].g, g[i].g);
            m = R - R0 * k * k;
            break;
        }
        case Hypothesis::D2: m = R - R0 * norm2(g0[i].g, g[i].g); break;
        case Hypothesis::D3: m = pencil_eigenvalues(R * g[i].g - R0 * g0[i].g, g[i].g)(0); break;
        case Hypothesis::D4: {
            const Vector nu = pencil_eigenvalues(g0[i].g, g[i].g);
            m = std::numeric_limits<double>::infinity();
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) m = std::min(m, R * R - R0 * R0 * nu(a) * nu(b));
            scale *= scale;
            break;
        }
        }
        out.margins.push_back(m);
        out.holds.push_back(m >= -strict_tolerance(scale));
    }
    return out;
}

RemarkFunctionals remark_functionals(const std::vector<PointState>& g0, const std::vector<PointState>& g)
{
    require_matched(g0, g);
    RemarkFunctionals f;
    f.f1 = f.f2 = -std::numeric_limits<double>::infinity();
    f.r_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g0.size(); ++i) {
        const double R0 = g0[i].scalar;
        const double k = norm1(g0[i].g, g[i].g);
        f.f1 = std::max(f.f1, R0 * k * k);
        if (g0[i].n >= 2) f.f2 = std::max(f.f2, R0 * norm2(g0[i].g, g[i].g));
        f.r_min = std::min(f.r_min, g[i].scalar);
    }
    return f;
}

// ---------------------------------------------------------------- conformal deformation

ConformalResult conformal_deform(const GeometryBackend& backend, const Expression& u, double s,
                                 const std::vector<Point>& points, int samples)
{
    const auto* chart = dynamic_cast<const ChartBackend*>(&backend);
    if (!chart) throw ValidationError("conformal deformation needs a chart metric");
    if (!std::isfinite(s) || s == 0.0) throw ValidationError("conformal parameter s must be finite and non-zero");
    if (samples < 3 || samples > 30) throw ValidationError("conformal sample count must be in 3..30");
    if (points.empty()) throw ValidationError("conformal deformation needs at least one point");
    if (u.max_variable() > backend.dimension()) throw ValidationError("u uses a variable beyond the dimension");

    const FieldPtr& g = chart->metric();
    const int n = g->dimension();
    ConformalResult out;
    out.s = s;
    out.deformed = std::make_shared<ChartBackend>(std::make_shared<ConformalField>(g, u, s),
                                                  chart->label() + " conformal");

    for (const Point& p : points) {
        chart->check_point(p);
        ConformalPoint cp;
        cp.point = p;
        const CurvatureJets c = curvature_jets(g->jets(p, 2));
        const Matrix ginv = symmetrized(values(c.inverse));
        const Christoffel gamma = values(c.christoffel);
        const std::vector<Jet> vars = make_variables(p, 2);
        const Jet uj = u.evaluate<Jet>(std::span<const Jet>(vars));
        cp.u = uj.value();
        cp.laplacian_u = laplacian(uj, ginv, gamma);
        Vector grad(n);
        for (int i = 0; i < n; ++i) grad(i) = uj.gradient(i);
        cp.gradient_sq = grad.dot(ginv * grad);
        cp.scalar = c.scalar.value();
        cp.first_order = -s * (n - 1) * cp.laplacian_u;

        for (int k = 0; k < samples; ++k) {
            const double sigma = std::ldexp(s, -k);
            if (!(1.0 + sigma * cp.u > 0.0)) throw GeometryError("conformal factor 1 + s*u is non-positive at a sample point");
            const ConformalField field(g, u, sigma);
            const double rs = curvature_report(field, p, false).scalar;
            if (k == 0) cp.deformed_scalar = rs;
            cp.sigma.push_back(sigma);
            cp.residual.push_back((1.0 + sigma * cp.u) * rs - cp.scalar + sigma * (n - 1) * cp.laplacian_u);
        }
        cp.slope = loglog_slope(cp.sigma, cp.residual);
        const std::size_t last = cp.sigma.size() - 1;
        const double a = cp.residual[last - 1] / (cp.sigma[last - 1] * cp.sigma[last - 1]);
        const double b = cp.residual[last] / (cp.sigma[last] * cp.sigma[last]);
        cp.second_order_empirical = 2.0 * b - a;
        cp.second_order_conformal_law = (n - 1) * (cp.u * cp.laplacian_u + (6.0 - n) / 4.0 * cp.gradient_sq);
        if (cp.u != 0.0)
            cp.second_order_stated = cp.u * cp.u * cp.scalar +
                                    (1.0 + s * cp.u) / 4.0 * std::pow(1.0 - s / cp.u, 3) * (2.0 * n - 2.0) * cp.gradient_sq;
        out.points.push_back(std::move(cp));
    }
    out.sigma = out.points.front().sigma;
    out.max_residual.assign(out.sigma.size(), 0.0);
    for (const ConformalPoint& cp : out.points)
        for (std::size_t k = 0; k < out.sigma.size(); ++k)
            out.max_residual[k] = std::max(out.max_residual[k], std::abs(cp.residual[k]));
    out.slope = loglog_slope(out.sigma, out.max_residual);
    return out;
}

}  // namespace scalrig
