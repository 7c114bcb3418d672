#include "scalrig/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "scalrig/error.hpp"

namespace scalrig {

LieAlgebraData make_algebra(std::string name, int dim)
{
    if (dim < 1 || dim > kMaxJetVars) throw ValidationError("Lie algebra dimension must be in 1..8");
    LieAlgebraData a;
    a.name = std::move(name);
    a.dim = dim;
    a.structure = Array3<double>(dim, 0.0);
    return a;
}

void LieAlgebraData::set_bracket(int i, int j, int k, double coef)
{
    if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim) throw ValidationError("bracket index out of range");
    if (i == j) throw ValidationError("[e_i, e_i] must vanish");
    structure(k, i, j) = coef;
    structure(k, j, i) = -coef;
}

double LieAlgebraData::jacobi_residual() const
{
    // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
    double worst = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int m = 0; m < dim; ++m) {
                    double v = 0.0;
                    for (int l = 0; l < dim; ++l)
                        v += structure(l, i, j) * structure(m, l, k) + structure(l, j, k) * structure(m, l, i) +
                             structure(l, k, i) * structure(m, l, j);
                    worst = std::max(worst, std::abs(v));
                }
    return worst;
}

void LieAlgebraData::validate() const
{
    if (structure.size() != dim) throw ValidationError("structure constant array has the wrong size");
    for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (structure(k, i, j) != -structure(k, j, i)) throw ValidationError("structure constants are not antisymmetric");
    if (!(jacobi_residual() < 1e-12)) throw ValidationError("structure constants violate the Jacobi identity");
}

LieAlgebraData unimodular3(const std::string& name, std::array<double, 3> l)
{
    LieAlgebraData a = make_algebra(name, 3);
    a.set_bracket(1, 2, 0, l[0]);
    a.set_bracket(2, 0, 1, l[1]);
    a.set_bracket(0, 1, 2, l[2]);
    return a;
}

LieAlgebraData su2() { return unimodular3("su2", {2.0, 2.0, 2.0}); }
LieAlgebraData heisenberg() { return unimodular3("heisenberg", {1.0, 0.0, 0.0}); }
LieAlgebraData sl2r() { return unimodular3("sl2r", {1.0, 1.0, -1.0}); }
LieAlgebraData e11() { return unimodular3("e11", {1.0, -1.0, 0.0}); }

FrameMetric make_frame_metric(LieAlgebraData algebra, Matrix gram)
{
    algebra.validate();
    if (gram.rows() != algebra.dim || gram.cols() != algebra.dim) throw ValidationError("Gram matrix size does not match the algebra");
    require_spd(gram, "Gram matrix");
    return FrameMetric{std::move(algebra), std::move(gram)};
}

CurvatureReport frame_curvature(const FrameMetric& m)
{
    m.algebra.validate();
    require_spd(m.gram, "Gram matrix");
    const int n = m.algebra.dim;
    const Matrix& c = m.gram;

    // gram = L L^T; f_a = sum_i M_ia e_i with M = L^{-T}; e_k = sum_a L_ka f_a.
    const Eigen::LLT<Matrix> llt(c);
    const Matrix L = llt.matrixL();
    const Matrix M = L.transpose().inverse();

    // C(c, a, b): [f_a, f_b] = C^c_ab f_c
    Array3<double> C(n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k) {
                double coef = 0.0;  // coefficient of e_k in [f_a, f_b]
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) coef += M(i, a) * M(j, b) * m.algebra.structure(k, i, j);
                if (coef == 0.0) continue;
                for (int cc = 0; cc < n; ++cc) C(cc, a, b) += coef * L(k, cc);
            }

    // G(c, a, b) = <∇_{f_a} f_b, f_c> = 1/2 (c_abc - c_bca + c_cab), c_abc = C^c_ab
    Array3<double> G(n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) G(cc, a, b) = 0.5 * (C(cc, a, b) - C(a, b, cc) + C(b, cc, a));

    // R(f_a, f_b) f_c = sum_e [G^d_bc G^e_ad - G^d_ac G^e_bd - C^d_ab G^e_dc] f_e; Ric_bc = sum_a <R(f_a,f_b)f_c, f_a>
    Matrix ric_f = Matrix::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc) {
            double sum = 0.0;
            for (int a = 0; a < n; ++a)
                for (int d = 0; d < n; ++d)
                    sum += G(d, b, cc) * G(a, a, d) - G(d, a, cc) * G(a, b, d) - C(d, a, b) * G(a, d, cc);
            ric_f(b, cc) = sum;
        }

    const Matrix ric = L * ric_f * L.transpose();

    // ∇_{e_i} e_j = sum L_ia L_jb G^c_ab f_c = sum L_ia L_jb G^c_ab M_kc e_k
    Christoffel gamma(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int cc = 0; cc < n; ++cc) v += L(i, a) * L(j, b) * G(cc, a, b) * M(k, cc);
                gamma(k, i, j) = v;
            }

    return make_report({}, c, ric, std::move(gamma), 0.0);
}

FrameMetric berger_metric(double p, double q)
{
    if (!std::isfinite(p) || !std::isfinite(q)) throw ValidationError("Berger parameters must be finite");
    if (p < 1.0 || q < p) throw ValidationError("Berger parameters must satisfy 1 <= p <= q");
    Matrix gram = Matrix::Zero(3, 3);
    gram(0, 0) = 1.0;
    gram(1, 1) = p;
    gram(2, 2) = q;
    return make_frame_metric(su2(), std::move(gram));
}

FrameMetric deform_frame_metric(const FrameMetric& m, double s)
{
    if (!std::isfinite(s)) throw ValidationError("deformation parameter must be finite");
    if (s == 0.0) return m;
    const CurvatureReport r = frame_curvature(m);
    const SpdInterval bounds = spd_interval(r.metric, r.traceless_ricci);
    if (!bounds.contains(s)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "deformation s = " << s << " leaves the positive definite cone; admissible s in (" << bounds.lower << ", "
            << bounds.upper << ")";
        throw GeometryError(msg.str(), bounds.lower, bounds.upper);
    }
    Matrix gram = symmetrized(m.gram - s * r.traceless_ricci);
    if (!is_spd(gram)) throw GeometryError("deformed Gram matrix is numerically singular", bounds.lower, bounds.upper);
    return FrameMetric{m.algebra, std::move(gram)};
}

std::string ricci_signature(const Vector& eigs)
{
    const double tol = 1e-10 * (1.0 + eigs.cwiseAbs().maxCoeff());
    std::vector<char> signs;
    for (double e : eigs) signs.push_back(e > tol ? '+' : (e < -tol ? '-' : '0'));
    // Order: '+' first, then '0', then '-'.
    std::stable_sort(signs.begin(), signs.end(), [](char a, char b) {
        auto rank = [](char x) { return x == '+' ? 0 : (x == '0' ? 1 : 2); };
        return rank(a) < rank(b);
    });
    std::string out = "(";
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (i) out += ',';
        out += signs[i];
    }
    return out + ")";
}

SignatureScan signature_scan(const LieAlgebraData& algebra, const std::vector<double>& grid)
{
    if (algebra.dim != 3) throw ValidationError("signature scan is defined for three-dimensional algebras");
    if (grid.empty()) throw ValidationError("empty parameter grid");
    for (double v : grid)
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("Gram diagonal entries must be positive");
    SignatureScan scan;
    std::set<std::string> found;
    for (double a : grid)
        for (double b : grid)
            for (double c : grid) {
                Matrix gram = Matrix::Zero(3, 3);
                gram(0, 0) = a;
                gram(1, 1) = b;
                gram(2, 2) = c;
                const CurvatureReport r = frame_curvature(make_frame_metric(algebra, gram));
                SignatureSample s{{a, b, c}, r.ricci_eigs, ricci_signature(r.ricci_eigs)};
                found.insert(s.signature);
                scan.samples.push_back(std::move(s));
            }
    scan.found.assign(found.begin(), found.end());
    return scan;
}

}  // namespace scalrig
