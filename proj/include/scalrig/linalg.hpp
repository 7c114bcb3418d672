#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace scalrig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative pivot tolerance for the SPD test.
inline constexpr double kSpdPivotTolerance = 1e-9;

/// True when `a` is symmetric and its LDL^T pivots all exceed
/// kSpdPivotTolerance * max(1, max |a_ii|).
bool is_spd(const Matrix& a, double tolerance = kSpdPivotTolerance);

/// Throws GeometryError naming `what` unless is_spd(a).
void require_spd(const Matrix& a, std::string_view what);

/// Ascending eigenvalues of the symmetric matrix `a`.
Vector symmetric_eigenvalues(const Matrix& a);

/// Ascending eigenvalues nu of the pencil a v = nu b v, with `a` symmetric and
/// `b` SPD. Factorizes `b` and solves the reduced standard problem.
Vector pencil_eigenvalues(const Matrix& a, const Matrix& b);

/// Symmetrize in place: (a + a^T) / 2.
Matrix symmetrized(const Matrix& a);

/// Dense n x n array of any element type (row-major).
template <class T>
class Array2 {
public:
    Array2() = default;
    explicit Array2(int n, const T& fill = T{}) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {}

    int size() const noexcept { return n_; }
    T& operator()(int i, int j) { return data_[index(i, j)]; }
    const T& operator()(int i, int j) const { return data_[index(i, j)]; }

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
    int n_ = 0;
    std::vector<T> data_;
};

/// Dense n x n x n array, indexed (k, i, j) as for Christoffel symbols Gamma^k_ij.
template <class T>
class Array3 {
public:
    Array3() = default;
    explicit Array3(int n, const T& fill = T{}) : n_(n), data_(static_cast<std::size_t>(n) * n * n, fill) {}

    int size() const noexcept { return n_; }
    T& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
    const T& operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

private:
    std::size_t index(int k, int i, int j) const { return (static_cast<std::size_t>(k) * n_ + i) * n_ + j; }
    int n_ = 0;
    std::vector<T> data_;
};

using Christoffel = Array3<double>;

/// Open interval (lower, upper) of s for which g - s * d stays positive definite,
/// from the pencil eigenvalues mu of (d, g): 1 - s * mu > 0. Infinite ends are
/// returned as +/- infinity.
struct SpdInterval {
    double lower;
    double upper;
    bool contains(double s) const noexcept { return s > lower && s < upper; }
};

SpdInterval spd_interval(const Matrix& g, const Matrix& d);

/// Least-squares slope of log|y| against log|x| over entries with x, y != 0;
/// NaN when fewer than two such entries remain.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Largest |a(k,i,j) - b(k,i,j)|.
double max_abs_difference(const Christoffel& a, const Christoffel& b);

}  // namespace scalrig
