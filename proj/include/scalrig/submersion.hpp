#pragma once

// Canonical variations g_t of Riemannian submersions with totally geodesic
// fibers, in closed form: Ric^t is lambda_V g_t on vertical vectors and
// lambda_H g_t on horizontal ones.

#include <string>
#include <vector>

#include "scalrig/state.hpp"

namespace scalrig {

struct CanonicalVariationModel {
    std::string name;
    int dim_f = 0;
    int dim_b = 0;
    double r_f = 0.0;
    double r_b = 0.0;
    double r_m = 0.0;
    double t = 1.0;

    int dimension() const noexcept { return dim_f + dim_b; }
    /// Throws ValidationError unless dim_f, dim_b >= 1 and t > 0.
    void validate() const;
};

/// S^{4n+3} -> HP^n with S^3 fibers.
CanonicalVariationModel hopf_variation(int n, double t);
/// CP^{2n+1} -> HP^n with S^2(4) fibers.
CanonicalVariationModel cp_variation(int n, double t);

struct VariationCurvature {
    double lambda_v = 0.0;
    double lambda_h = 0.0;
    double scalar = 0.0;
    double traceless_norm_sq = 0.0;
};

/// lambda_V = R^F/(t dimF) + t (R^M/n - R^F/dimF), lambda_H = R^B/dimB + t (R^M/n - R^B/dimB).
VariationCurvature variation_curvature(const CanonicalVariationModel& m);

/// All t > 0 with lambda_V(t) = lambda_H(t), ascending, each reported once.
std::vector<double> einstein_parameters(const CanonicalVariationModel& family);

/// "vertical > horizontal", "horizontal > vertical" or "equal".
std::string eigenvalue_ordering(const VariationCurvature& c);

/// State in a g_t-orthonormal adapted basis (vertical directions first).
PointState variation_state(const CanonicalVariationModel& m);

/// State of g_t - s Ric°: that metric is b * g_{t a / b} with
/// a = 1 - s (lambda_V - R/n), b = 1 - s (lambda_H - R/n).
PointState deformed_variation_state(const CanonicalVariationModel& m, double s);

struct VariationMargins {
    AssumptionMargin t1, t2, t3, t4;
};

VariationMargins variation_assumption_margins(const CanonicalVariationModel& m);

}  // namespace scalrig
