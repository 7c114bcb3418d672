#pragma once

// The traceless-Ricci deformation g_s = g - s Ric°, the two Listing norms,
// the theorem conclusion margins, s-scans, the rigidity hypotheses and the
// conformal deformation (1 + s u) g.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scalrig/algebra.hpp"
#include "scalrig/chart.hpp"
#include "scalrig/state.hpp"
#include "scalrig/submersion.hpp"

namespace scalrig {

using Point = std::vector<double>;

/// A metric that can report curvature at points, and curvature of its own
/// traceless-Ricci deformation.
class GeometryBackend {
public:
    virtual ~GeometryBackend() = default;

    virtual std::string kind() const = 0;  // "chart", "frame" or "submersion"
    virtual std::string label() const = 0;
    virtual int dimension() const = 0;
    /// Homogeneous backends have a single, empty point.
    virtual bool homogeneous() const = 0;
    virtual std::vector<Point> default_points() const = 0;

    /// Curvature at `point`, with ΔR when available.
    virtual PointState state(std::span<const double> point) const = 0;
    /// Curvature of g - s Ric° at `point` (ΔR not computed); GeometryError outside the SPD cone.
    virtual PointState deformed_state(std::span<const double> point, double s) const = 0;
    /// Throws ValidationError when `point` is not valid for this backend.
    virtual void check_point(std::span<const double> point) const = 0;
};

using BackendPtr = std::shared_ptr<const GeometryBackend>;

class ChartBackend final : public GeometryBackend {
public:
    ChartBackend(FieldPtr metric, std::string label);

    std::string kind() const override { return "chart"; }
    std::string label() const override { return label_; }
    int dimension() const override { return metric_->dimension(); }
    bool homogeneous() const override { return false; }
    std::vector<Point> default_points() const override;
    PointState state(std::span<const double> point) const override;
    PointState deformed_state(std::span<const double> point, double s) const override;
    void check_point(std::span<const double> point) const override;

    const FieldPtr& metric() const noexcept { return metric_; }
    CurvatureReport report(std::span<const double> point, bool with_laplacian) const;

private:
    FieldPtr metric_;
    std::string label_;
};

class FrameBackend final : public GeometryBackend {
public:
    FrameBackend(FrameMetric metric, std::string label);

    std::string kind() const override { return "frame"; }
    std::string label() const override { return label_; }
    int dimension() const override { return metric_.algebra.dim; }
    bool homogeneous() const override { return true; }
    std::vector<Point> default_points() const override { return {Point{}}; }
    PointState state(std::span<const double> point) const override;
    PointState deformed_state(std::span<const double> point, double s) const override;
    void check_point(std::span<const double> point) const override;

    const FrameMetric& metric() const noexcept { return metric_; }

private:
    FrameMetric metric_;
    std::string label_;
};

class SubmersionBackend final : public GeometryBackend {
public:
    SubmersionBackend(CanonicalVariationModel model, std::string label);

    std::string kind() const override { return "submersion"; }
    std::string label() const override { return label_; }
    int dimension() const override { return model_.dimension(); }
    bool homogeneous() const override { return true; }
    std::vector<Point> default_points() const override { return {Point{}}; }
    PointState state(std::span<const double> point) const override;
    PointState deformed_state(std::span<const double> point, double s) const override;
    void check_point(std::span<const double> point) const override;

    const CanonicalVariationModel& model() const noexcept { return model_; }

private:
    CanonicalVariationModel model_;
    std::string label_;
};

// ---------------------------------------------------------------- deformation and norms

struct Deformation {
    Matrix g_s;
    Vector shifts;       // 1 - s (mu_i - R/n) for ascending Ricci eigenvalues mu_i
    SpdInterval bounds;  // s keeping g_s positive definite
};

/// GeometryError carrying the SPD bounds when g - s Ric° is not positive definite.
Deformation deform(const PointState& state, double s);

/// sqrt(max_v a(v,v) / b(v,v)).
double norm1(const Matrix& a, const Matrix& b);
/// sqrt of the largest ratio on 2-vectors: sqrt(nu_1 nu_2) for the two largest pencil eigenvalues.
double norm2(const Matrix& a, const Matrix& b);

// ---------------------------------------------------------------- conclusions

/// T1: R_s - R norm1(g, g_s)^2; T2: R_s - R norm2(g, g_s);
/// T3: extreme pencil eigenvalue of R_s g_s - R g against g;
/// T4: extreme of R_s^2 nu_i nu_j - R^2 over pairs, nu the pencil eigenvalues of (g_s, g).
/// The extreme is the minimum for s >= 0 and the maximum for s < 0, so the
/// conclusion holds when the margin is positive (s > 0) or negative (s < 0).
double conclusion_margin(const PointState& base, const PointState& deformed, double s, Theorem theorem);
double conclusion_margin(const GeometryBackend& backend, std::span<const double> point, double s, Theorem theorem);

/// d/ds of the conclusion margin at s = 0 from the side given by `direction`.
/// Each margin is an extremum over eigen-directions of functions that are
/// smooth in s; the binding function for that side is differentiated by a
/// central difference with step h, so the kink at s = 0 does not bias the estimate.
double conclusion_slope(const GeometryBackend& backend, std::span<const double> point, Theorem theorem,
                        Direction direction, double h = 1e-4);

// ---------------------------------------------------------------- scans

struct ScanResult {
    Theorem theorem = Theorem::T1;
    Direction direction = Direction::positive;
    std::vector<double> s_grid;            // ascending |s|
    std::vector<Point> points;
    std::vector<std::vector<double>> margins;  // [s][point], NaN where g_s is not SPD
    std::vector<std::vector<bool>> spd_ok;     // [s][point]
    std::optional<double> spd_limit;           // |s| bound of the SPD cone; empty when unbounded
    bool degenerate = false;                   // every margin vanishes (e.g. Einstein input)
    std::optional<std::pair<double, double>> admissible;  // (0, s*) or (s*, 0)
    std::vector<double> slope_at_zero;         // per point
    std::vector<double> assumption;            // per point, the direction's assumption margin
};

ScanResult scan_s(const GeometryBackend& backend, const std::vector<Point>& points, Theorem theorem,
                  Direction direction, double s_max, int steps);

// ---------------------------------------------------------------- hypotheses and functionals

enum class Hypothesis { D1 = 1, D2 = 2, D3 = 3, D4 = 4 };

Hypothesis hypothesis_from_int(int k);

struct HypothesisResult {
    std::vector<bool> holds;
    std::vector<double> margins;
};

/// D1: R_g - R0 norm1(g0, g)^2; D2: R_g - R0 norm2(g0, g);
/// D3: min pencil eigenvalue of (R_g g - R0 g0, g); D4: min over pairs of R_g^2 - R0^2 nu_i nu_j,
/// nu the pencil eigenvalues of (g0, g). Holds when margin >= -tolerance.
HypothesisResult rigidity_hypothesis(const std::vector<PointState>& g0, const std::vector<PointState>& g, Hypothesis kind);

struct RemarkFunctionals {
    double f1 = 0.0;
    double f2 = 0.0;
    double r_min = 0.0;
};

RemarkFunctionals remark_functionals(const std::vector<PointState>& g0, const std::vector<PointState>& g);

// ---------------------------------------------------------------- conformal deformation

struct ConformalPoint {
    Point point;
    double u = 0.0;
    double laplacian_u = 0.0;
    double gradient_sq = 0.0;   // |∇u|^2_g
    double scalar = 0.0;        // R_g
    double deformed_scalar = 0.0;  // R of (1 + s u) g
    double first_order = 0.0;   // -s (n - 1) Δu
    std::vector<double> sigma;  // sampled parameters s 2^-k
    std::vector<double> residual;  // (1 + σu) R' - R + σ (n - 1) Δu
    double slope = 0.0;         // log-log slope of |residual|
    double second_order_empirical = 0.0;
    double second_order_conformal_law = 0.0;  // (n - 1)(u Δu + (6 - n)/4 |∇u|^2)
    std::optional<double> second_order_stated;    // u^2 R + (1 + s u)/4 (1 - s/u)^3 (2n - 2)|∇u|^2; none when u = 0
};

struct ConformalResult {
    std::shared_ptr<ChartBackend> deformed;
    double s = 0.0;
    std::vector<ConformalPoint> points;
    std::vector<double> sigma;         // shared by all points
    std::vector<double> max_residual;  // max over points of |residual| per sigma
    double slope = 0.0;                // log-log slope of max_residual
};

/// Chart backends only. GeometryError when 1 + s u <= 0 at a sample point.
ConformalResult conformal_deform(const GeometryBackend& backend, const Expression& u, double s,
                                 const std::vector<Point>& points, int samples = 6);

}  // namespace scalrig
