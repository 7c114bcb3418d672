#include "scalrig/oracle.hpp"

#include <cmath>
#include <vector>

#include "scalrig/error.hpp"

namespace scalrig::oracle {

Matrix lambda2_gram(const Matrix& a)
{
    const int n = static_cast<int>(a.rows());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const int m = static_cast<int>(pairs.size());
    Matrix out(m, m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            const auto [i, j] = pairs[p];
            const auto [k, l] = pairs[q];
            out(p, q) = a(i, k) * a(j, l) - a(i, l) * a(j, k);
        }
    return out;
}

double norm2_brute_force(const Matrix& a, const Matrix& b)
{
    if (a.rows() < 2) throw ValidationError("the 2-vector norm needs dimension >= 2");
    const Matrix ga = lambda2_gram(a);
    const Matrix gb = lambda2_gram(b);
    // Generalized problem solved through an explicit Cholesky whitening of gb.
    const Eigen::LLT<Matrix> llt(gb);
    if (llt.info() != Eigen::Success) throw ValidationError("2-vector Gram matrix is not positive definite");
    const Matrix linv = llt.matrixL().solve(Matrix::Identity(gb.rows(), gb.cols()));
    const Matrix w = linv * ga * linv.transpose();
    const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (w + w.transpose()), Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

std::array<double, 3> milnor_ricci(std::array<double, 3> l, std::array<double, 3> d)
{
    // f_i = e_i / sqrt(d_i) gives [f2,f3] = l1 sqrt(d1 / (d2 d3)) f1 and cyclically.
    const double vol = d[0] * d[1] * d[2];
    std::array<double, 3> lam{};
    for (int i = 0; i < 3; ++i) lam[i] = l[i] * d[i] / std::sqrt(vol);
    const double half = 0.5 * (lam[0] + lam[1] + lam[2]);
    const std::array<double, 3> mu{half - lam[0], half - lam[1], half - lam[2]};
    return {2 * mu[1] * mu[2], 2 * mu[0] * mu[2], 2 * mu[0] * mu[1]};
}

std::array<double, 3> berger_ricci(double s, double t)
{
    const double k = -1.0 / (s * t);
    return {k * (-2 + 2 * t * t + 2 * s * s - 4 * s * t), k * (2 + 2 * t * t - 2 * s * s - 4 * t),
            k * (2 - 2 * t * t + 2 * s * s - 4 * s)};
}

double berger_scalar(double s, double t) { return 2.0 / (s * t) * (2 * (s + t + s * t) - (1 + s * s + t * t)); }

namespace {

double sq(double x) { return x * x; }

}  // namespace

double hopf_traceless_norm_sq(int n, double t)
{
    const double r = 6 / t - 12 * n * t + 16 * n * (n + 2);
    return 3 * sq(2 / t + 4 * n * t - r / (4 * n + 3)) + 4 * n * sq(4 * (n + 2) - 6 * t - r / (4 * n + 3));
}

double hopf_traceless_norm_sq_collected(int n, double t)
{
    const double d = 4 * n + 3;
    return 3 * sq(8 * n / d / t + 4 * n * (4 * n + 6) / d * t - 16 * n * (n + 2) / d) +
           4 * n * sq(6 / d / t + (12 * n + 18) / d * t - 4 * (n + 2) * (4 * n - 1) / d);
}

double cp_traceless_norm_sq(int n, double t)
{
    const double r = 8 / t - 8 * n * t + 16 * n * (n + 2);
    return 2 * sq(4 / t + 4 * n * t - r / (4 * n + 2)) + 4 * n * sq(4 * (n + 2) - 4 * t - r / (4 * n + 2));
}

double cp_traceless_norm_sq_collected(int n, double t)
{
    const double d = 2 * n + 1;
    return 2 * sq(8 * n / d / t + 2 * n * (4 * n + 4) / d * t - 8 * n * (n + 2) / d) +
           4 * n * sq(4 / d / t + 4 * (n + 1) / d * t - 4 * (n + 2) / d);
}

}  // namespace scalrig::oracle
