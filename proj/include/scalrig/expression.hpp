#pragma once

// Arithmetic expressions over coordinates x1..x8:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | base ('^' ['-'] integer)?
//   base   := number | var | ident '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus, so -x1^2 is -(x1^2).

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "scalrig/error.hpp"
#include "scalrig/jet.hpp"

namespace scalrig {

enum class Function { sin, cos, exp, log, sqrt, sinh, cosh, tanh };

struct ExprNode {
    enum class Kind { number, variable, add, sub, mul, div, neg, pow, call };

    Kind kind = Kind::number;
    double number = 0.0;
    int variable = 0;  // 0-based
    int exponent = 0;
    Function function = Function::sin;
    std::unique_ptr<ExprNode> lhs;
    std::unique_ptr<ExprNode> rhs;
};

class Expression {
public:
    /// The constant 0.
    Expression();

    /// Parses `source`; variables must satisfy 1 <= k <= max_variables.
    static Expression parse(std::string_view source, int max_variables = kMaxJetVars);
    static Expression constant(double value);

    const std::string& source() const noexcept { return source_; }
    const ExprNode& root() const noexcept { return *root_; }
    /// Longest root-to-leaf path, counted in edges.
    int depth() const;
    /// Highest variable index used (1-based), 0 for constants.
    int max_variable() const noexcept { return max_variable_; }
    bool is_zero_constant() const;

    template <class Scalar>
    Scalar evaluate(std::span<const Scalar> vars) const;

private:
    std::shared_ptr<const ExprNode> root_;
    std::string source_;
    int max_variable_ = 0;
};

Expression parse_expression(std::string_view source, int max_variables = kMaxJetVars);

namespace detail {

inline double apply_function(Function f, double x)
{
    switch (f) {
    case Function::sin: return std::sin(x);
    case Function::cos: return std::cos(x);
    case Function::exp: return std::exp(x);
    case Function::log: return checked_log(x);
    case Function::sqrt: return checked_sqrt(x);
    case Function::sinh: return std::sinh(x);
    case Function::cosh: return std::cosh(x);
    case Function::tanh: return std::tanh(x);
    }
    return 0.0;
}

inline Jet apply_function(Function f, const Jet& x)
{
    switch (f) {
    case Function::sin: return sin(x);
    case Function::cos: return cos(x);
    case Function::exp: return exp(x);
    case Function::log: return log(x);
    case Function::sqrt: return sqrt(x);
    case Function::sinh: return sinh(x);
    case Function::cosh: return cosh(x);
    case Function::tanh: return tanh(x);
    }
    return x;
}

inline double power(double x, int e) { return checked_pow(x, e); }
inline Jet power(const Jet& x, int e) { return pow(x, e); }
inline double divide(double a, double b) { return a * checked_reciprocal(b); }
inline Jet divide(const Jet& a, const Jet& b) { return a / b; }

template <class Scalar>
Scalar evaluate_node(const ExprNode& node, std::span<const Scalar> vars)
{
    using K = ExprNode::Kind;
    switch (node.kind) {
    case K::number: return scalar_constant(vars.front(), node.number);
    case K::variable:
        if (static_cast<std::size_t>(node.variable) >= vars.size())
            throw ValidationError("expression uses x" + std::to_string(node.variable + 1) + " but only " +
                                  std::to_string(vars.size()) + " coordinates are bound");
        return vars[static_cast<std::size_t>(node.variable)];
    case K::add: return evaluate_node(*node.lhs, vars) + evaluate_node(*node.rhs, vars);
    case K::sub: return evaluate_node(*node.lhs, vars) - evaluate_node(*node.rhs, vars);
    case K::mul: return evaluate_node(*node.lhs, vars) * evaluate_node(*node.rhs, vars);
    case K::div: return divide(evaluate_node(*node.lhs, vars), evaluate_node(*node.rhs, vars));
    case K::neg: return -evaluate_node(*node.lhs, vars);
    case K::pow: return power(evaluate_node(*node.lhs, vars), node.exponent);
    case K::call: return apply_function(node.function, evaluate_node(*node.lhs, vars));
    }
    return scalar_constant(vars.front(), 0.0);
}

}  // namespace detail

template <class Scalar>
Scalar Expression::evaluate(std::span<const Scalar> vars) const
{
    if (vars.empty()) throw ValidationError("expression evaluation needs at least one coordinate");
    return detail::evaluate_node(*root_, vars);
}

}  // namespace scalrig
