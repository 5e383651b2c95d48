#pragma once
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gengeo/errors.hpp"

namespace gengeo {

class DeltaNet;

// The scalar-field expression language. Trees are immutable and shared;
// symmetric containers (metrics, Christoffel symbols, curvature) store the
// *same* node for mirrored slots, which is what the structural symmetry
// assertions in the tests check.
//
// Grammar (ASCII):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?          (right-assoc; binds tighter than unary -)
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// Reserved: eps, delta, delta1, delta2, heaviside, pos, sin, cos, exp, log,
// sqrt, tanh. Any other identifier is a variable.

enum class ExprKind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Func { Sin, Cos, Exp, Log, Sqrt, Tanh, Delta, Delta1, Delta2, Heaviside, Pos };

const char* func_name(Func f);
bool is_delta_family(Func f);    // delta, delta1, delta2
bool is_singular(Func f);        // delta family + heaviside + pos

struct ExprNode {
    ExprKind kind;
    double number = 0.0;   // Number
    std::string name;      // Variable
    Func func{};           // Call
    std::shared_ptr<const ExprNode> a, b;
};

// Values bound during evaluation. Variable lookup is a linear scan; the
// vectors are tiny (coordinates + a few parameters).
struct Bindings {
    std::vector<std::string> names;
    std::vector<double> values;
    double eps = 1.0;
    const DeltaNet* delta = nullptr;

    void set(const std::string& name, double value);
    // Fast path for hot loops: overwrite the first `n` slots.
    void assign_front(std::span<const double> v) {
        for (std::size_t i = 0; i < v.size(); ++i) values[i] = v[i];
    }
    std::string snapshot() const;
};

class Expr {
public:
    Expr() = default;
    bool valid() const { return static_cast<bool>(node_); }

    static Expr number(double v);
    static Expr variable(const std::string& name);
    static Expr call(Func f, const Expr& arg);

    friend Expr operator+(const Expr&, const Expr&);
    friend Expr operator-(const Expr&, const Expr&);
    friend Expr operator*(const Expr&, const Expr&);
    friend Expr operator/(const Expr&, const Expr&);
    friend Expr operator-(const Expr&);
    Expr pow(const Expr& exponent) const;

    bool is_zero() const { return node_ && node_->kind == ExprKind::Number && node_->number == 0.0; }
    bool is_number() const { return node_ && node_->kind == ExprKind::Number; }
    double number_value() const { return node_->number; }
    const ExprNode* node() const { return node_.get(); }
    std::shared_ptr<const ExprNode> ptr() const { return node_; }
    bool same_object(const Expr& other) const { return node_ == other.node_; }

    double evaluate(const Bindings& b) const;
    Expr differentiate(const std::string& var) const;

    std::set<std::string> free_variables() const;    // excludes "eps"
    bool references_eps() const;
    bool references_delta() const;                   // delta family
    bool references_singular() const;                // + heaviside/pos
    bool references_heaviside_pos() const;           // reference-only symbols
    int max_delta_order() const;                     // 0..2, -1 if none
    // Arguments of delta-family calls (for impulse-window detection).
    std::vector<Expr> delta_arguments() const;

    std::string to_string() const;

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
    friend Expr make_expr(std::shared_ptr<const ExprNode>);
};

Expr make_expr(std::shared_ptr<const ExprNode> n);

// Parses `text`; throws ConfigError with a character position on syntax
// errors and on nested singular composition (delta(delta(u)) and friends).
Expr parse_expr(const std::string& text);

} // namespace gengeo
