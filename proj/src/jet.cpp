#include "scalrig/jet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "scalrig/error.hpp"

namespace scalrig {

namespace {

constexpr std::uint32_t kRadix = kMaxJetOrder + 1;

std::uint32_t encode(const MultiIndex& alpha)
{
    std::uint32_t key = 0;
    for (int i = kMaxJetVars - 1; i >= 0; --i) key = key * kRadix + alpha[static_cast<std::size_t>(i)];
    return key;
}

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void append_degree(int num_vars, int degree, std::vector<MultiIndex>& out)
{
    MultiIndex alpha{};
    // Lexicographically descending in (alpha_0, alpha_1, ...).
    std::function<void(int, int)> fill = [&](int var, int remaining) {
        if (var == num_vars - 1) {
            alpha[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
            out.push_back(alpha);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            alpha[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
            fill(var + 1, remaining - e);
        }
        alpha[static_cast<std::size_t>(var)] = 0;
    };
    fill(0, degree);
}

double factorial(int k)
{
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

}  // namespace

MultiIndex make_multi_index(std::initializer_list<int> exponents)
{
    if (exponents.size() > static_cast<std::size_t>(kMaxJetVars))
        throw ValidationError("multi-index has more than 8 entries");
    MultiIndex alpha{};
    std::size_t i = 0;
    for (int e : exponents) {
        if (e < 0 || e > kMaxJetOrder) throw ValidationError("multi-index entry out of range");
        alpha[i++] = static_cast<std::uint8_t>(e);
    }
    return alpha;
}

int total_degree(const MultiIndex& alpha)
{
    int d = 0;
    for (auto e : alpha) d += e;
    return d;
}

// ----------------------------------------------------------------------------
// JetLayout
// ----------------------------------------------------------------------------

JetLayout::JetLayout(int num_vars, int order) : num_vars_(num_vars), order_(order)
{
    for (int d = 0; d <= order; ++d) append_degree(num_vars, d, exponents_);
    const std::size_t n = exponents_.size();

    degrees_.resize(n);
    keys_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        degrees_[i] = total_degree(exponents_[i]);
        keys_.emplace_back(encode(exponents_[i]), static_cast<std::uint32_t>(i));
    }
    std::sort(keys_.begin(), keys_.end());

    raised_.assign(static_cast<std::size_t>(num_vars) * n, npos);
    for (int v = 0; v < num_vars; ++v) {
        for (std::size_t i = 0; i < n; ++i) {
            if (degrees_[i] == order) continue;
            MultiIndex up = exponents_[i];
            ++up[static_cast<std::size_t>(v)];
            raised_[static_cast<std::size_t>(v) * n + i] = find(up);
        }
    }

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (degrees_[a] + degrees_[b] > order) continue;
            MultiIndex sum{};
            double weight = 1.0;
            for (int v = 0; v < num_vars; ++v) {
                const auto k = static_cast<std::size_t>(v);
                sum[k] = static_cast<std::uint8_t>(exponents_[a][k] + exponents_[b][k]);
                weight *= binomial(sum[k], exponents_[a][k]);
            }
            products_.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                                 static_cast<std::uint16_t>(find(sum)), weight});
        }
    }
}

const JetLayout& JetLayout::get(int num_vars, int order)
{
    if (num_vars < 1 || num_vars > kMaxJetVars)
        throw ValidationError("jet variable count must be in 1..8, got " + std::to_string(num_vars));
    if (order < 0 || order > kMaxJetOrder)
        throw ValidationError("jet order must be in 0..4, got " + std::to_string(order));

    using Registry = std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetVars + 1>;
    static const auto registry = [] {
        auto r = std::make_unique<Registry>();
        for (int v = 1; v <= kMaxJetVars; ++v)
            for (int o = 0; o <= kMaxJetOrder; ++o)
                (*r)[static_cast<std::size_t>(v)][static_cast<std::size_t>(o)].reset(new JetLayout(v, o));
        return r;
    }();
    return *(*registry)[static_cast<std::size_t>(num_vars)][static_cast<std::size_t>(order)];
}

std::size_t JetLayout::find(const MultiIndex& alpha) const
{
    for (int v = num_vars_; v < kMaxJetVars; ++v)
        if (alpha[static_cast<std::size_t>(v)] != 0) return npos;
    if (total_degree(alpha) > order_) return npos;
    const std::uint32_t key = encode(alpha);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), std::make_pair(key, std::uint32_t{0}));
    if (it == keys_.end() || it->first != key) return npos;
    return it->second;
}

// ----------------------------------------------------------------------------
// Jet
// ----------------------------------------------------------------------------

Jet::Jet() : Jet(JetLayout::get(1, 0), 0.0) {}

Jet::Jet(const JetLayout& layout, double value) : layout_(&layout), coeffs_(layout.size(), 0.0)
{
    coeffs_[0] = value;
}

Jet Jet::constant(int num_vars, int order, double value) { return Jet(JetLayout::get(num_vars, order), value); }

Jet Jet::variable(int num_vars, int order, int var, double value)
{
    if (var < 0 || var >= num_vars) throw ValidationError("jet variable index out of range");
    Jet j = constant(num_vars, order, value);
    if (order >= 1) {
        MultiIndex e{};
        e[static_cast<std::size_t>(var)] = 1;
        j.coeffs_[j.layout_->find(e)] = 1.0;
    }
    return j;
}

double Jet::partial(const MultiIndex& alpha) const
{
    const std::size_t i = layout_->find(alpha);
    if (i == JetLayout::npos) {
        if (total_degree(alpha) > order())
            throw ValidationError("partial of degree " + std::to_string(total_degree(alpha)) +
                                  " exceeds jet order " + std::to_string(order()));
        throw ValidationError("multi-index refers to a variable the jet does not have");
    }
    return coeffs_[i];
}

double Jet::gradient(int var) const
{
    MultiIndex e{};
    e.at(static_cast<std::size_t>(var)) = 1;
    return partial(e);
}

double Jet::hessian(int a, int b) const
{
    MultiIndex e{};
    ++e.at(static_cast<std::size_t>(a));
    ++e.at(static_cast<std::size_t>(b));
    return partial(e);
}

Jet Jet::derivative(int var) const
{
    if (order() < 1) throw ValidationError("cannot differentiate an order-0 jet");
    if (var < 0 || var >= num_vars()) throw ValidationError("jet variable index out of range");
    Jet out(JetLayout::get(num_vars(), order() - 1), 0.0);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[layout_->raised(var, i)];
    return out;
}

Jet Jet::truncated(int new_order) const
{
    if (new_order > order()) throw ValidationError("cannot raise the order of a jet by truncation");
    if (new_order == order()) return *this;
    Jet out(JetLayout::get(num_vars(), new_order), 0.0);
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
}

void Jet::require_same_shape(const Jet& other, const char* op) const
{
    if (layout_ != other.layout_)
        throw ValidationError(std::string("jet shape mismatch in ") + op + ": (" + std::to_string(num_vars()) + ", " +
                              std::to_string(order()) + ") vs (" + std::to_string(other.num_vars()) + ", " +
                              std::to_string(other.order()) + ")");
}

Jet& Jet::operator+=(const Jet& rhs)
{
    require_same_shape(rhs, "+");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs)
{
    require_same_shape(rhs, "-");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator+=(double rhs)
{
    coeffs_[0] += rhs;
    return *this;
}

Jet& Jet::operator-=(double rhs)
{
    coeffs_[0] -= rhs;
    return *this;
}

Jet& Jet::operator*=(double rhs)
{
    for (auto& c : coeffs_) c *= rhs;
    return *this;
}

Jet& Jet::operator/=(double rhs)
{
    if (rhs == 0.0) throw DomainError("jet division by zero");
    for (auto& c : coeffs_) c /= rhs;
    return *this;
}

Jet operator-(Jet a)
{
    for (auto& c : a.coeffs_) c = -c;
    return a;
}

Jet operator*(const Jet& a, const Jet& b)
{
    a.require_same_shape(b, "*");
    Jet out(*a.layout_, 0.0);
    for (const auto& t : a.layout_->product_terms()) out.coeffs_[t.out] += t.weight * a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
    return out;
}

Jet operator/(const Jet& a, const Jet& b)
{
    a.require_same_shape(b, "/");
    return a * reciprocal(b);
}

Jet operator/(double a, const Jet& b) { return reciprocal(b) *= a; }

std::vector<Jet> make_variables(std::span<const double> point, int order)
{
    if (point.empty() || point.size() > static_cast<std::size_t>(kMaxJetVars))
        throw ValidationError("jet seed point must have 1..8 coordinates, got " + std::to_string(point.size()));
    const int n = static_cast<int>(point.size());
    std::vector<Jet> vars;
    vars.reserve(point.size());
    for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(n, order, i, point[static_cast<std::size_t>(i)]));
    return vars;
}

// ----------------------------------------------------------------------------
// Univariate composition
// ----------------------------------------------------------------------------

Jet compose(const Jet& a, std::span<const double> derivatives)
{
    const int k_max = a.order();
    if (derivatives.size() < static_cast<std::size_t>(k_max) + 1)
        throw ValidationError("composition needs one derivative per order");
    Jet delta = a;
    delta.coefficients()[0] = 0.0;
    Jet r = Jet::constant_like(a, derivatives[static_cast<std::size_t>(k_max)] / factorial(k_max));
    for (int k = k_max - 1; k >= 0; --k) {
        r = r * delta;
        r += derivatives[static_cast<std::size_t>(k)] / factorial(k);
    }
    return r;
}

double checked_sqrt(double x)
{
    if (!(x > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(x));
    return std::sqrt(x);
}

double checked_log(double x)
{
    if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
    return std::log(x);
}

double checked_reciprocal(double x)
{
    if (x == 0.0) throw DomainError("division by zero");
    return 1.0 / x;
}

double checked_pow(double x, int exponent)
{
    if (exponent < 0 && x == 0.0) throw DomainError("negative power of zero");
    return std::pow(x, exponent);
}

Jet reciprocal(const Jet& a)
{
    const double x = a.value();
    if (x == 0.0) throw DomainError("jet division by a jet with zero value");
    std::array<double, kMaxJetOrder + 1> d{};
    double p = 1.0 / x;
    for (int k = 0; k <= kMaxJetOrder; ++k) {
        d[static_cast<std::size_t>(k)] = ((k % 2) ? -1.0 : 1.0) * factorial(k) * p;
        p /= x;
    }
    return compose(a, d);
}

Jet sqrt(const Jet& a)
{
    const double x = a.value();
    const double s = checked_sqrt(x);
    const std::array<double, kMaxJetOrder + 1> d{s, 0.5 / s, -0.25 / (x * s), 0.375 / (x * x * s),
                                                  -0.9375 / (x * x * x * s)};
    return compose(a, d);
}

Jet exp(const Jet& a)
{
    const double e = std::exp(a.value());
    const std::array<double, kMaxJetOrder + 1> d{e, e, e, e, e};
    return compose(a, d);
}

Jet log(const Jet& a)
{
    const double x = a.value();
    const double l = checked_log(x);
    const std::array<double, kMaxJetOrder + 1> d{l, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x), -6.0 / (x * x * x * x)};
    return compose(a, d);
}

Jet sin(const Jet& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const std::array<double, kMaxJetOrder + 1> d{s, c, -s, -c, s};
    return compose(a, d);
}

Jet cos(const Jet& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const std::array<double, kMaxJetOrder + 1> d{c, -s, -c, s, c};
    return compose(a, d);
}

Jet sinh(const Jet& a)
{
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    const std::array<double, kMaxJetOrder + 1> d{s, c, s, c, s};
    return compose(a, d);
}

Jet cosh(const Jet& a)
{
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    const std::array<double, kMaxJetOrder + 1> d{c, s, c, s, c};
    return compose(a, d);
}

Jet tanh(const Jet& a)
{
    const double t = std::tanh(a.value());
    const double sech2 = 1.0 - t * t;
    const std::array<double, kMaxJetOrder + 1> d{t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0),
                                                  sech2 * (16.0 * t - 24.0 * t * t * t)};
    return compose(a, d);
}

Jet pow(const Jet& a, int exponent)
{
    const double x = a.value();
    if (exponent < 0 && x == 0.0) throw DomainError("negative power of a jet with zero value");
    std::array<double, kMaxJetOrder + 1> d{};
    double falling = 1.0;
    for (int k = 0; k <= kMaxJetOrder; ++k) {
        d[static_cast<std::size_t>(k)] = falling == 0.0 ? 0.0 : falling * std::pow(x, exponent - k);
        falling *= exponent - k;
    }
    return compose(a, d);
}

}  // namespace scalrig
