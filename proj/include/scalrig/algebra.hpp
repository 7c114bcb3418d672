#pragma once

// Left-invariant metrics on Lie groups, described by structure constants of the
// Lie algebra and an inner product on it. Curvature is computed in an
// orthonormal frame obtained from a Cholesky factor of the Gram matrix.

#include <array>
#include <string>
#include <vector>

#include "scalrig/chart.hpp"
#include "scalrig/linalg.hpp"

namespace scalrig {

struct LieAlgebraData {
    std::string name;
    int dim = 0;
    Array3<double> structure;  // (k, i, j) = c^k_ij, [e_i, e_j] = c^k_ij e_k

    /// Sets [e_i, e_j] = coef * e_k and the antisymmetric partner (0-based indices).
    void set_bracket(int i, int j, int k, double coef);
    double jacobi_residual() const;
    /// Throws ValidationError unless antisymmetric and Jacobi residual < 1e-12.
    void validate() const;
};

LieAlgebraData make_algebra(std::string name, int dim);

/// su(2) in the basis X1 = diag(i, -i), X2 = [[0,1],[-1,0]], X3 = [[0,i],[i,0]]:
/// [X1,X2] = 2 X3, [X2,X3] = 2 X1, [X3,X1] = 2 X2.
LieAlgebraData su2();
/// [e2, e3] = e1.
LieAlgebraData heisenberg();
/// [e2,e3] = e1, [e3,e1] = e2, [e1,e2] = -e3.
LieAlgebraData sl2r();
/// [e2,e3] = e1, [e3,e1] = -e2.
LieAlgebraData e11();
/// Three-dimensional unimodular algebra with [e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = l3 e3.
LieAlgebraData unimodular3(const std::string& name, std::array<double, 3> l);

struct FrameMetric {
    LieAlgebraData algebra;
    Matrix gram;
};

FrameMetric make_frame_metric(LieAlgebraData algebra, Matrix gram);

/// Christoffel entries are the connection coefficients ∇_{e_i} e_j = Γ^k_ij e_k
/// in the algebra basis; the Laplacian of R is 0 by homogeneity. The point is empty.
CurvatureReport frame_curvature(const FrameMetric& m);

/// Berger metric diag(1, p, q) on su(2); requires 1 <= p <= q.
FrameMetric berger_metric(double p, double q);

/// gram - s * (traceless Ricci); GeometryError with the open SPD interval otherwise.
FrameMetric deform_frame_metric(const FrameMetric& m, double s);

struct SignatureSample {
    std::array<double, 3> gram_diagonal;
    Vector ricci_eigs;
    std::string signature;  // e.g. "(+,-,-)"
};

/// Ricci signatures of diag(a, b, c) metrics for a, b, c on `grid`; the distinct
/// signatures found are in `found` (sorted).
struct SignatureScan {
    std::vector<SignatureSample> samples;
    std::vector<std::string> found;
};

SignatureScan signature_scan(const LieAlgebraData& algebra, const std::vector<double>& grid);

/// Signature of ascending eigenvalues, zero threshold 1e-10 * (1 + max |eig|).
std::string ricci_signature(const Vector& eigs);

}  // namespace scalrig
