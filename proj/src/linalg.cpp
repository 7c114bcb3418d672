#include "scalrig/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scalrig/error.hpp"

namespace scalrig {

bool is_spd(const Matrix& a, double tolerance)
{
    if (a.rows() != a.cols() || a.rows() == 0) return false;
    if (!a.allFinite()) return false;
    const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
    Eigen::LDLT<Matrix> ldlt(a);
    if (ldlt.info() != Eigen::Success) return false;
    return ldlt.vectorD().minCoeff() > tolerance * scale;
}

void require_spd(const Matrix& a, std::string_view what)
{
    if (!is_spd(a)) throw GeometryError(std::string(what) + " is not symmetric positive definite");
}

Vector symmetric_eigenvalues(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

Vector pencil_eigenvalues(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw ValidationError("pencil matrices must be square and of equal size");
    require_spd(b, "pencil right-hand matrix");
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(symmetrized(a), symmetrized(b),
                                                            Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) throw GeometryError("degenerate matrix pencil");
    return solver.eigenvalues();
}

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

SpdInterval spd_interval(const Matrix& g, const Matrix& d)
{
    const Vector mu = pencil_eigenvalues(d, g);
    const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
    SpdInterval out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (double m : mu) {
        if (std::abs(m) <= 1e-14 * scale) continue;
        if (m > 0)
            out.upper = std::min(out.upper, 1.0 / m);
        else
            out.lower = std::max(out.lower, 1.0 / m);
    }
    return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) throw ValidationError("slope fit needs equally many abscissae and ordinates");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0 || y[i] == 0.0 || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        const double lx = std::log(std::abs(x[i]));
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    const double denom = m * sxx - sx * sx;
    if (m < 2 || denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / denom;
}

double max_abs_difference(const Christoffel& a, const Christoffel& b)
{
    if (a.size() != b.size()) throw ValidationError("tensor size mismatch");
    double m = 0.0;
    const int n = a.size();
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m = std::max(m, std::abs(a(k, i, j) - b(k, i, j)));
    return m;
}

}  // namespace scalrig
