#pragma once

// Truncated multivariate Taylor arithmetic ("jets") up to order 4 in at most
// 8 variables. Coefficients are raw partial derivatives d^alpha f, stored
// densely in graded order (all degree-0 slots, then degree 1, ...), so the
// coefficients of a lower-order jet are a prefix of those of a higher-order one.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace scalrig {

inline constexpr int kMaxJetVars = 8;
inline constexpr int kMaxJetOrder = 4;

/// Exponent vector; entries beyond the jet's variable count must be zero.
using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

MultiIndex make_multi_index(std::initializer_list<int> exponents);
int total_degree(const MultiIndex& alpha);

/// Precomputed index tables for one (num_vars, order) shape. Shared, immutable.
class JetLayout {
public:
    struct ProductTerm {
        std::uint16_t lhs;
        std::uint16_t rhs;
        std::uint16_t out;
        double weight;  // prod_i binom(alpha_i + beta_i, alpha_i)
    };

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Throws std::invalid_argument when the shape is out of range.
    static const JetLayout& get(int num_vars, int order);

    int num_vars() const noexcept { return num_vars_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return exponents_.size(); }

    const MultiIndex& exponent(std::size_t i) const { return exponents_[i]; }
    int degree(std::size_t i) const { return degrees_[i]; }

    /// Index of alpha, or npos when its degree exceeds the order.
    std::size_t find(const MultiIndex& alpha) const;

    /// Index of exponent(i) + e_var, or npos when that exceeds the order.
    std::size_t raised(int var, std::size_t i) const { return raised_[static_cast<std::size_t>(var) * size() + i]; }

    std::span<const ProductTerm> product_terms() const noexcept { return products_; }

private:
    JetLayout(int num_vars, int order);

    int num_vars_;
    int order_;
    std::vector<MultiIndex> exponents_;
    std::vector<int> degrees_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> keys_;  // (encoded alpha, index), sorted
    std::vector<std::size_t> raised_;
    std::vector<ProductTerm> products_;
};

class Jet {
public:
    /// The constant 0 in one variable at order 0.
    Jet();
    Jet(const JetLayout& layout, double value);

    static Jet constant(int num_vars, int order, double value);
    static Jet variable(int num_vars, int order, int var, double value);
    /// A constant with the same shape as `like`.
    static Jet constant_like(const Jet& like, double value) { return Jet(*like.layout_, value); }

    const JetLayout& layout() const noexcept { return *layout_; }
    int num_vars() const noexcept { return layout_->num_vars(); }
    int order() const noexcept { return layout_->order(); }

    double value() const noexcept { return coeffs_.front(); }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<double> coefficients() noexcept { return coeffs_; }

    /// Raw partial derivative d^alpha; throws when |alpha| exceeds the order.
    double partial(const MultiIndex& alpha) const;
    double partial(std::initializer_list<int> exponents) const { return partial(make_multi_index(exponents)); }
    /// First partial d_var.
    double gradient(int var) const;
    /// Second partial d_a d_b.
    double hessian(int a, int b) const;

    /// d/dx_var as a jet of one lower order. Requires order >= 1.
    Jet derivative(int var) const;
    /// Drop every coefficient of degree above `order`.
    Jet truncated(int order) const;

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator/=(const Jet& rhs);
    Jet& operator+=(double rhs);
    Jet& operator-=(double rhs);
    Jet& operator*=(double rhs);
    Jet& operator/=(double rhs);

    friend Jet operator-(Jet a);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator/(Jet a, double b) { return a /= b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(double a, const Jet& b) { return -b + a; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(double a, const Jet& b);

private:
    void require_same_shape(const Jet& other, const char* op) const;

    const JetLayout* layout_;
    std::vector<double> coeffs_;
};

/// One jet per coordinate: value point[i], d_i = 1, everything else 0.
std::vector<Jet> make_variables(std::span<const double> point, int order);

/// f(a) from the derivatives f^(k)(a.value()), k = 0..a.order().
Jet compose(const Jet& a, std::span<const double> derivatives);

Jet reciprocal(const Jet& a);
Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet pow(const Jet& a, int exponent);

// Plain-number counterparts with the same domain checks, so generic code over
// double or Jet fails identically.
double checked_sqrt(double x);
double checked_log(double x);
double checked_reciprocal(double x);
double checked_pow(double x, int exponent);

/// `value` converted to the scalar type of `like`.
inline double scalar_constant(double /*like*/, double value) { return value; }
inline Jet scalar_constant(const Jet& like, double value) { return Jet::constant_like(like, value); }

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace scalrig
