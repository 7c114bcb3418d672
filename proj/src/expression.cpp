#include "scalrig/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <utility>

namespace scalrig {

namespace {

using Node = ExprNode;
using NodePtr = std::unique_ptr<ExprNode>;

struct FunctionName {
    std::string_view name;
    Function function;
};

constexpr FunctionName kFunctions[] = {
    {"sin", Function::sin},   {"cos", Function::cos},   {"exp", Function::exp},   {"log", Function::log},
    {"sqrt", Function::sqrt}, {"sinh", Function::sinh}, {"cosh", Function::cosh}, {"tanh", Function::tanh},
};

class Parser {
public:
    Parser(std::string_view src, int max_variables) : src_(src), max_variables_(max_variables) {}

    NodePtr parse()
    {
        NodePtr e = expr();
        skip_space();
        if (!at_end()) fail(std::string("unexpected '") + src_[pos_] + "'");
        return e;
    }

    int max_variable() const { return max_seen_; }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

    bool at_end() const { return pos_ >= src_.size(); }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (!at_end() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(Node::Kind kind, NodePtr lhs, NodePtr rhs)
    {
        auto n = std::make_unique<Node>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = binary(Node::Kind::add, std::move(lhs), term());
            else if (accept('-'))
                lhs = binary(Node::Kind::sub, std::move(lhs), term());
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = binary(Node::Kind::mul, std::move(lhs), factor());
            else if (accept('/'))
                lhs = binary(Node::Kind::div, std::move(lhs), factor());
            else
                return lhs;
        }
    }

    NodePtr factor()
    {
        if (accept('-')) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::neg;
            n->lhs = factor();
            return n;
        }
        NodePtr b = base();
        if (accept('^')) {
            skip_space();
            const std::size_t start = pos_;
            bool negative = false;
            if (!at_end() && (src_[pos_] == '-' || src_[pos_] == '+')) {
                negative = src_[pos_] == '-';
                ++pos_;
            }
            const std::size_t digits = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ == digits) {
                pos_ = start;
                fail("exponent must be an integer literal");
            }
            if (!at_end() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
                pos_ = start;
                fail("non-integer exponent");
            }
            int value = 0;
            auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
            if (ec != std::errc() || value > 64) {
                pos_ = start;
                fail("exponent out of range");
            }
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::pow;
            n->exponent = negative ? -value : value;
            n->lhs = std::move(b);
            return n;
        }
        return b;
    }

    NodePtr base()
    {
        skip_space();
        if (at_end()) fail("unexpected end of expression");
        const char c = src_[pos_];

        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("unbalanced parenthesis, expected ')'");
            return e;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            const std::string_view ident = src_.substr(start, pos_ - start);

            if (ident.size() >= 2 && ident[0] == 'x' &&
                std::all_of(ident.begin() + 1, ident.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
                int k = 0;
                auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), k);
                if (ec != std::errc() || k < 1 || k > max_variables_) {
                    pos_ = start;
                    fail("variable " + std::string(ident) + " out of range (dimension " +
                         std::to_string(max_variables_) + ")");
                }
                max_seen_ = std::max(max_seen_, k);
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::variable;
                n->variable = k - 1;
                return n;
            }

            for (const auto& f : kFunctions) {
                if (f.name != ident) continue;
                if (!accept('(')) fail("expected '(' after " + std::string(ident));
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::call;
                n->function = f.function;
                n->lhs = expr();
                if (!accept(')')) fail("unbalanced parenthesis, expected ')'");
                return n;
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(ident) + "'");
        }

        fail(std::string("unexpected '") + c + "'");
    }

    NodePtr number()
    {
        const std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) {
            pos_ = start;
            fail("malformed number '" + text + "'");
        }
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::number;
        n->number = v;
        return n;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int max_variables_;
    int max_seen_ = 0;
};

int node_depth(const ExprNode& n)
{
    int d = 0;
    if (n.lhs) d = std::max(d, 1 + node_depth(*n.lhs));
    if (n.rhs) d = std::max(d, 1 + node_depth(*n.rhs));
    return d;
}

}  // namespace

Expression::Expression() : root_(std::make_shared<ExprNode>()), source_("0") {}

Expression Expression::parse(std::string_view source, int max_variables)
{
    if (max_variables < 1 || max_variables > kMaxJetVars) throw ValidationError("expression dimension must be in 1..8");
    Parser p(source, max_variables);
    Expression e;
    e.root_ = std::shared_ptr<const ExprNode>(p.parse());
    e.source_ = std::string(source);
    e.max_variable_ = p.max_variable();
    return e;
}

Expression Expression::constant(double value)
{
    auto n = std::make_shared<ExprNode>();
    n->number = value;
    Expression e;
    e.root_ = std::move(n);
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    e.source_.assign(buf, ptr);
    return e;
}

int Expression::depth() const { return node_depth(*root_); }

bool Expression::is_zero_constant() const { return root_->kind == ExprNode::Kind::number && root_->number == 0.0; }

Expression parse_expression(std::string_view source, int max_variables) { return Expression::parse(source, max_variables); }

}  // namespace scalrig
