#pragma once

// Pointwise curvature data and the pointwise inequalities built from it.

#include <string>

#include "scalrig/chart.hpp"
#include "scalrig/linalg.hpp"

namespace scalrig {

enum class Theorem { T1 = 1, T2 = 2, T3 = 3, T4 = 4 };
enum class Direction { positive, negative };

Theorem theorem_from_int(int k);
std::string to_string(Theorem t);
std::string to_string(Direction d);

struct PointState {
    int n = 0;
    Matrix g;
    Matrix ric;
    Matrix traceless;
    double scalar = 0.0;
    double lap_scalar = 0.0;  // NaN when not available
    Vector ricci_eigs;        // ascending, w.r.t. g
    double traceless_norm_sq = 0.0;
};

/// Uses report.laplacian_scalar, or NaN when the report has none.
PointState make_state(const CurvatureReport& report);
PointState make_state(const Matrix& g, const Matrix& ric, double lap_scalar);

/// (3n - 2) / (2n), the Laplacian weight in the Theorem 1-3 assumptions.
double laplacian_weight(int n);

struct AssumptionMargin {
    Theorem theorem = Theorem::T1;
    double positive = 0.0;  // margin whose strict positivity is the assumption for s > 0
    double negative = 0.0;  // same for s < 0 (the "resp." line)
    // Theorem 2 only: the lambda_1 and lambda_n branch margins (NaN otherwise).
    double lambda_min_branch = 0.0;
    double lambda_max_branch = 0.0;
    std::string pairing;  // Theorem 2: which branch serves which direction at this point
};

/// T1: base - R lambda_max (resp. base - R lambda_min), base = w ΔR + |Ric°|^2 + R^2/n.
/// T2: both branches; positive uses lambda_1 if R <= 0, lambda_n if R >= 0; negative swaps.
/// T3: smallest eigenvalue of base g - R Ric with respect to g (both directions).
/// T4: min over pairs i < j of 2w R ΔR + 2R|Ric°|^2 + R^3/n - R^2 (lambda_i + lambda_j - R/n).
/// When |Ric°| <= strict_tolerance(R) the Ricci terms cancel exactly and only the ΔR terms remain.
AssumptionMargin assumption_margin(const PointState& state, Theorem theorem);

/// Strictness threshold 1e-10 * (1 + |scale|).
double strict_tolerance(double scale);

}  // namespace scalrig
