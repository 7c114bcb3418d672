#pragma once

// Curvature of metrics given by components on a coordinate box.
//
// Every quantity is computed from jets of the metric components at a point:
// an order-K metric jet gives Christoffel symbols to order K-1 and Ricci and
// scalar curvature to order K-2. Order 2 yields pointwise curvature, order 4
// yields the 2-jet of the scalar curvature and hence its Laplacian.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "scalrig/expression.hpp"
#include "scalrig/jet.hpp"
#include "scalrig/linalg.hpp"

namespace scalrig {

using JetMatrix = Array2<Jet>;
using JetChristoffel = Array3<Jet>;

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    static Box cube(int dim, double lo, double hi);
    int dimension() const noexcept { return static_cast<int>(lower.size()); }
    bool contains(std::span<const double> point) const;
    std::vector<double> center() const;
};

/// A symmetric (0,2)-tensor field on a coordinate box, sampled as jets.
class TensorField {
public:
    virtual ~TensorField() = default;

    virtual int dimension() const = 0;
    virtual const Box& domain() const = 0;
    /// Highest jet order this field can produce.
    virtual int max_order() const { return kMaxJetOrder; }

    /// Component jets at `point`. Throws ValidationError when the point lies
    /// outside the domain or `order` exceeds max_order().
    JetMatrix jets(std::span<const double> point, int order) const;

protected:
    virtual JetMatrix compute_jets(std::span<const double> point, int order) const = 0;
};

using FieldPtr = std::shared_ptr<const TensorField>;

/// Components given as expressions in x1..x_dim; the lower triangle is authoritative.
class ChartMetric final : public TensorField {
public:
    ChartMetric(int dim, Box domain, Array2<Expression> components);

    /// `lower[i][j]` for j <= i holds the (i, j) component source.
    static std::shared_ptr<ChartMetric> from_strings(int dim, Box domain,
                                                     const std::vector<std::vector<std::string>>& lower);

    int dimension() const override { return dim_; }
    const Box& domain() const override { return domain_; }
    const Expression& component(int i, int j) const { return i >= j ? components_(i, j) : components_(j, i); }

protected:
    JetMatrix compute_jets(std::span<const double> point, int order) const override;

private:
    int dim_;
    Box domain_;
    Array2<Expression> components_;
};

/// g - s * (Ric_g - (R_g / n) g), differentiated through the curvature of the base.
class TracelessDeformedField final : public TensorField {
public:
    TracelessDeformedField(FieldPtr base, double s);

    int dimension() const override { return base_->dimension(); }
    const Box& domain() const override { return base_->domain(); }
    int max_order() const override { return base_->max_order() - 2; }
    double parameter() const noexcept { return s_; }

protected:
    JetMatrix compute_jets(std::span<const double> point, int order) const override;

private:
    FieldPtr base_;
    double s_;
};

/// (1 + s u) g for a scalar expression u.
class ConformalField final : public TensorField {
public:
    ConformalField(FieldPtr base, Expression u, double s);

    int dimension() const override { return base_->dimension(); }
    const Box& domain() const override { return base_->domain(); }
    int max_order() const override { return base_->max_order(); }

protected:
    JetMatrix compute_jets(std::span<const double> point, int order) const override;

private:
    FieldPtr base_;
    Expression u_;
    double s_;
};

/// g + t h.
class CombinationField final : public TensorField {
public:
    CombinationField(FieldPtr g, FieldPtr h, double t);

    int dimension() const override { return g_->dimension(); }
    const Box& domain() const override { return g_->domain(); }
    int max_order() const override;

protected:
    JetMatrix compute_jets(std::span<const double> point, int order) const override;

private:
    FieldPtr g_;
    FieldPtr h_;
    double t_;
};

/// factor * Ric_g.
class RicciField final : public TensorField {
public:
    RicciField(FieldPtr base, double factor);

    int dimension() const override { return base_->dimension(); }
    const Box& domain() const override { return base_->domain(); }
    int max_order() const override { return base_->max_order() - 2; }

protected:
    JetMatrix compute_jets(std::span<const double> point, int order) const override;

private:
    FieldPtr base_;
    double factor_;
};

struct CurvatureJets {
    int order = 0;                // order of the metric jets
    JetMatrix metric;             // order K
    JetMatrix inverse;            // order K
    JetChristoffel christoffel;   // order K-1
    JetMatrix ricci;              // order K-2
    Jet scalar;                   // order K-2
};

/// Curvature from metric jets of order >= 2.
CurvatureJets curvature_jets(const JetMatrix& metric);
/// Christoffel symbols from metric jets of order >= 1 (result has order K-1).
JetChristoffel christoffel_jets(const JetMatrix& metric, const JetMatrix& inverse);

/// Generic Gauss-Jordan inverse with partial pivoting on the values.
template <class Scalar>
Array2<Scalar> invert(const Array2<Scalar>& a);

Matrix values(const JetMatrix& m);
Christoffel values(const JetChristoffel& c);
JetMatrix truncated(const JetMatrix& m, int order);

struct CurvatureReport {
    std::vector<double> point;
    Matrix metric;
    Matrix inverse_metric;
    Christoffel christoffel;
    Matrix ricci;
    double scalar = 0.0;
    Matrix traceless_ricci;
    Vector ricci_eigs;  // ascending, w.r.t. the metric
    double traceless_norm_sq = 0.0;
    std::optional<double> laplacian_scalar;
};

/// Fills every derived field of a report from metric, Ricci tensor and point.
CurvatureReport make_report(std::vector<double> point, const Matrix& metric, const Matrix& ricci,
                            Christoffel christoffel, std::optional<double> laplacian_scalar);

Christoffel christoffel(const TensorField& metric, std::span<const double> point);
CurvatureReport curvature_report(const TensorField& metric, std::span<const double> point, bool with_laplacian);

/// g^{ij} (d_i d_j f - Gamma^k_ij d_k f) for a jet f of order >= 2.
double laplacian(const Jet& f, const Matrix& inverse_metric, const Christoffel& gamma);
/// Laplacian of a scalar expression u.
double function_laplacian(const TensorField& metric, const Expression& u, std::span<const double> point);

struct DifferenceTensor {
    Christoffel connection_difference;  // Gamma(g) - Gamma(g_bar)
    Christoffel covariant_formula;      // 1/2 g^{kl} (∇̄_i g_lj + ∇̄_j g_il - ∇̄_l g_ij)
    double discrepancy = 0.0;           // max entrywise difference of the two
};

DifferenceTensor difference_tensor(const TensorField& g, const TensorField& g_bar, std::span<const double> point);

/// Ricci of g assembled from the Ricci of g_bar and the difference tensor W:
/// R_ij = R̄_ij + ∇̄_k W^k_ij - ∇̄_i W^k_kj + W^p_ij W^k_kp - W^p_kj W^k_ip.
Matrix ricci_via_background(const TensorField& g, const TensorField& g_bar, std::span<const double> point);

/// DR|_g(h) = -Δ_g(tr_g h) + div_g div_g h - <Ric_g, h>_g.
double linearized_scalar(const TensorField& g, const TensorField& h, std::span<const double> point);

struct ExpansionReport {
    std::vector<double> t;
    std::vector<double> residual;         // R_{g+th} - R_g - t DR|_g(h)
    double slope = 0.0;                   // least squares of log|r| against log t; NaN if r vanishes
    bool residual_identically_zero = false;
    double linearization = 0.0;           // DR|_g(h)
    double inverse_identity_residual = 0.0;
};

/// Throws GeometryError when g + t h is not SPD at the point for some t.
ExpansionReport expansion_residual(const FieldPtr& g, const FieldPtr& h, std::span<const double> point,
                                   std::span<const double> t_grid);

/// max_j |(div_g Ric_g)_j - 1/2 d_j R_g|; needs order-3 metric jets.
double bianchi_residual(const TensorField& g, std::span<const double> point);

// ---------------------------------------------------------------------------

template <class Scalar>
Array2<Scalar> invert(const Array2<Scalar>& a)
{
    const int n = a.size();
    Array2<Scalar> work = a;
    Array2<Scalar> inv(n, scalar_constant(a(0, 0), 0.0));
    for (int i = 0; i < n; ++i) inv(i, i) = scalar_constant(a(0, 0), 1.0);

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(value_of(work(r, col))) > std::abs(value_of(work(pivot, col)))) pivot = r;
        if (value_of(work(pivot, col)) == 0.0) throw DomainError("singular matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(work(pivot, c), work(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        }
        const Scalar scale = 1.0 / work(col, col);
        for (int c = 0; c < n; ++c) {
            work(col, c) = work(col, c) * scale;
            inv(col, c) = inv(col, c) * scale;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Scalar f = work(r, col);
            for (int c = 0; c < n; ++c) {
                work(r, c) -= f * work(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

}  // namespace scalrig
