#include "scalrig/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scalrig/error.hpp"

namespace scalrig {

void CanonicalVariationModel::validate() const
{
    if (dim_f < 1 || dim_b < 1) throw ValidationError("fiber and base dimensions must be >= 1");
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("variation parameter t must be positive");
    if (!std::isfinite(r_f) || !std::isfinite(r_b) || !std::isfinite(r_m)) throw ValidationError("scalar curvatures must be finite");
}

namespace {

void check_family_index(int n)
{
    if (n < 1 || n > 16) throw ValidationError("family index n must be in 1..16");
}

}  // namespace

CanonicalVariationModel hopf_variation(int n, double t)
{
    check_family_index(n);
    CanonicalVariationModel m{"hopf", 3, 4 * n, 6.0, 16.0 * n * (n + 2), (4.0 * n + 3) * (4.0 * n + 2), t};
    m.validate();
    return m;
}

CanonicalVariationModel cp_variation(int n, double t)
{
    check_family_index(n);
    CanonicalVariationModel m{"cp", 2, 4 * n, 8.0, 16.0 * n * (n + 2), (4.0 * n + 4) * (4.0 * n + 2), t};
    m.validate();
    return m;
}

VariationCurvature variation_curvature(const CanonicalVariationModel& m)
{
    m.validate();
    const double n = m.dimension();
    const double kf = m.r_f / m.dim_f;
    const double kb = m.r_b / m.dim_b;
    const double km = m.r_m / n;
    VariationCurvature c;
    c.lambda_v = kf / m.t + m.t * (km - kf);
    c.lambda_h = kb + m.t * (km - kb);
    c.scalar = m.dim_f * c.lambda_v + m.dim_b * c.lambda_h;
    const double avg = c.scalar / n;
    c.traceless_norm_sq = m.dim_f * std::pow(c.lambda_v - avg, 2) + m.dim_b * std::pow(c.lambda_h - avg, 2);
    return c;
}

std::vector<double> einstein_parameters(const CanonicalVariationModel& family)
{
    CanonicalVariationModel f = family;
    f.t = 1.0;
    f.validate();
    // t (lambda_V - lambda_H) = A t^2 + B t + C
    const double kf = f.r_f / f.dim_f;
    const double kb = f.r_b / f.dim_b;
    const double A = kb - kf;
    const double B = -kb;
    const double C = kf;
    std::vector<double> roots;
    if (A == 0.0) {
        if (B != 0.0) roots.push_back(-C / B);
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
            if (q != 0.0) {
                roots.push_back(q / A);
                roots.push_back(C / q);
            } else {
                roots.push_back(0.0);
            }
        }
    }
    std::vector<double> out;
    for (double r : roots)
        if (r > 0.0 && std::isfinite(r)) out.push_back(r);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); }),
              out.end());
    return out;
}

std::string eigenvalue_ordering(const VariationCurvature& c)
{
    const double tol = 1e-12 * (1.0 + std::max(std::abs(c.lambda_v), std::abs(c.lambda_h)));
    if (std::abs(c.lambda_v - c.lambda_h) <= tol) return "equal";
    return c.lambda_v > c.lambda_h ? "vertical > horizontal" : "horizontal > vertical";
}

namespace {

Matrix block_diagonal(int dim_f, int dim_b, double v, double h)
{
    Matrix m = Matrix::Zero(dim_f + dim_b, dim_f + dim_b);
    for (int i = 0; i < dim_f; ++i) m(i, i) = v;
    for (int i = 0; i < dim_b; ++i) m(dim_f + i, dim_f + i) = h;
    return m;
}

}  // namespace

PointState variation_state(const CanonicalVariationModel& m)
{
    const VariationCurvature c = variation_curvature(m);
    return make_state(block_diagonal(m.dim_f, m.dim_b, 1.0, 1.0), block_diagonal(m.dim_f, m.dim_b, c.lambda_v, c.lambda_h), 0.0);
}

PointState deformed_variation_state(const CanonicalVariationModel& m, double s)
{
    const VariationCurvature c = variation_curvature(m);
    const double avg = c.scalar / m.dimension();
    const double a = 1.0 - s * (c.lambda_v - avg);
    const double b = 1.0 - s * (c.lambda_h - avg);
    if (!(a > 0.0) || !(b > 0.0)) {
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (double mu : {c.lambda_v - avg, c.lambda_h - avg}) {
            if (mu > 0) hi = std::min(hi, 1.0 / mu);
            if (mu < 0) lo = std::max(lo, 1.0 / mu);
        }
        std::ostringstream msg;
        msg.precision(17);
        msg << "deformation s = " << s << " leaves the positive definite cone; admissible s in (" << lo << ", " << hi << ")";
        throw GeometryError(msg.str(), lo, hi);
    }
    CanonicalVariationModel scaled = m;
    scaled.t = m.t * a / b;
    const VariationCurvature cs = variation_curvature(scaled);
    // Ricci is scale invariant: Ric(b g_{t'}) = Ric(g_{t'}) = lambda_V(t') (a/b) on V, lambda_H(t') on H.
    return make_state(block_diagonal(m.dim_f, m.dim_b, a, b), block_diagonal(m.dim_f, m.dim_b, cs.lambda_v * a / b, cs.lambda_h), 0.0);
}

VariationMargins variation_assumption_margins(const CanonicalVariationModel& m)
{
    const PointState st = variation_state(m);
    return {assumption_margin(st, Theorem::T1), assumption_margin(st, Theorem::T2), assumption_margin(st, Theorem::T3),
            assumption_margin(st, Theorem::T4)};
}

}  // namespace scalrig
