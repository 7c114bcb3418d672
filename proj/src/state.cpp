#include "scalrig/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scalrig/error.hpp"

namespace scalrig {

Theorem theorem_from_int(int k)
{
    if (k < 1 || k > 4) throw ValidationError("theorem must be 1, 2, 3 or 4");
    return static_cast<Theorem>(k);
}

std::string to_string(Theorem t) { return "T" + std::to_string(static_cast<int>(t)); }
std::string to_string(Direction d) { return d == Direction::positive ? "pos" : "neg"; }

PointState make_state(const Matrix& g, const Matrix& ric, double lap_scalar)
{
    require_spd(g, "metric");
    if (ric.rows() != g.rows() || ric.cols() != g.cols()) throw ValidationError("Ricci tensor and metric differ in size");
    PointState s;
    s.n = static_cast<int>(g.rows());
    s.g = g;
    s.ric = symmetrized(ric);
    const Matrix ginv = g.inverse();
    s.scalar = ginv.cwiseProduct(s.ric).sum();
    s.traceless = s.ric - (s.scalar / s.n) * g;
    s.lap_scalar = lap_scalar;
    s.ricci_eigs = pencil_eigenvalues(s.ric, g);
    const Matrix a = ginv * s.traceless;
    s.traceless_norm_sq = (a * a).trace();
    return s;
}

PointState make_state(const CurvatureReport& r)
{
    PointState s = make_state(r.metric, r.ricci, r.laplacian_scalar.value_or(std::numeric_limits<double>::quiet_NaN()));
    return s;
}

double laplacian_weight(int n) { return (3.0 * n - 2.0) / (2.0 * n); }

double strict_tolerance(double scale) { return 1e-10 * (1.0 + std::abs(scale)); }

AssumptionMargin assumption_margin(const PointState& st, Theorem theorem)
{
    const int n = st.n;
    const double R = st.scalar;
    const double w = laplacian_weight(n);
    // Written in the traceless eigenvalues mu_i = lambda_i - R/n; the R^2/n terms cancel.
    // A pointwise Einstein state (|Ric°| below tolerance) has mu = 0 exactly.
    const bool einstein = std::sqrt(std::max(0.0, st.traceless_norm_sq)) <= strict_tolerance(R);
    const Vector mu = einstein ? Vector::Zero(n) : Vector(st.ricci_eigs.array() - R / n);
    const double norm_sq = einstein ? 0.0 : st.traceless_norm_sq;
    const double base = w * st.lap_scalar + norm_sq;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    AssumptionMargin m;
    m.theorem = theorem;
    m.lambda_min_branch = nan;
    m.lambda_max_branch = nan;
    switch (theorem) {
    case Theorem::T1:
        m.positive = base - R * mu(n - 1);
        m.negative = base - R * mu(0);
        break;
    case Theorem::T2:
        m.lambda_min_branch = base - R * mu(0);
        m.lambda_max_branch = base - R * mu(n - 1);
        if (R <= 0.0) {
            m.positive = m.lambda_min_branch;
            m.negative = m.lambda_max_branch;
            m.pairing = R == 0.0 ? "R = 0: both branches coincide" : "R <= 0: s > 0 uses lambda_1, s < 0 uses lambda_n";
        } else {
            m.positive = m.lambda_max_branch;
            m.negative = m.lambda_min_branch;
            m.pairing = "R >= 0: s > 0 uses lambda_n, s < 0 uses lambda_1";
        }
        break;
    case Theorem::T3:
        // base g - R Ric° is diagonal in an eigenbasis of Ric
        m.positive = m.negative = (base - R * mu.array()).minCoeff();
        break;
    case Theorem::T4: {
        if (n < 2) throw ValidationError("Theorem 4 needs dimension >= 2");
        const double lead = 2.0 * w * R * st.lap_scalar + 2.0 * R * norm_sq;
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) worst = std::min(worst, lead - R * R * (mu(i) + mu(j)));
        m.positive = m.negative = worst;
        break;
    }
    }
    return m;
}

}  // namespace scalrig
