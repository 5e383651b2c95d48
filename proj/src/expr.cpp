#include "gengeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "gengeo/delta_net.hpp"

namespace gengeo {

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Tanh: return "tanh";
        case Func::Delta: return "delta";
        case Func::Delta1: return "delta1";
        case Func::Delta2: return "delta2";
        case Func::Heaviside: return "heaviside";
        case Func::Pos: return "pos";
    }
    return "?";
}

bool is_delta_family(Func f) {
    return f == Func::Delta || f == Func::Delta1 || f == Func::Delta2;
}

bool is_singular(Func f) {
    return is_delta_family(f) || f == Func::Heaviside || f == Func::Pos;
}

void Bindings::set(const std::string& name, double value) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            values[i] = value;
            return;
        }
    }
    names.push_back(name);
    values.push_back(value);
}

std::string Bindings::snapshot() const {
    std::ostringstream os;
    os << "eps=" << eps;
    for (std::size_t i = 0; i < names.size(); ++i)
        os << ", " << names[i] << "=" << values[i];
    return os.str();
}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr mk(ExprKind k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    return n;
}

NodePtr num_node(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->number = v;
    return n;
}

bool is_num(const NodePtr& n, double v) {
    return n->kind == ExprKind::Number && n->number == v;
}

// Smart constructors: constant folding plus 0/1 identities, nothing more.
NodePtr mk_add(NodePtr a, NodePtr b);
NodePtr mk_sub(NodePtr a, NodePtr b);
NodePtr mk_mul(NodePtr a, NodePtr b);
NodePtr mk_div(NodePtr a, NodePtr b);
NodePtr mk_pow(NodePtr a, NodePtr b);
NodePtr mk_neg(NodePtr a);
NodePtr mk_call(Func f, NodePtr a);

NodePtr mk_bin(ExprKind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr mk_add(NodePtr a, NodePtr b) {
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number)
        return num_node(a->number + b->number);
    if (is_num(a, 0.0)) return b;
    if (is_num(b, 0.0)) return a;
    return mk_bin(ExprKind::Add, std::move(a), std::move(b));
}

NodePtr mk_neg(NodePtr a) {
    if (a->kind == ExprKind::Number) return num_node(-a->number);
    if (a->kind == ExprKind::Neg) return a->a;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Neg;
    n->a = std::move(a);
    return n;
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number)
        return num_node(a->number - b->number);
    if (is_num(b, 0.0)) return a;
    if (is_num(a, 0.0)) return mk_neg(std::move(b));
    return mk_bin(ExprKind::Sub, std::move(a), std::move(b));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number)
        return num_node(a->number * b->number);
    if (is_num(a, 0.0) || is_num(b, 0.0)) return num_node(0.0);
    if (is_num(a, 1.0)) return b;
    if (is_num(b, 1.0)) return a;
    return mk_bin(ExprKind::Mul, std::move(a), std::move(b));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number && b->number != 0.0)
        return num_node(a->number / b->number);
    if (is_num(a, 0.0) && !is_num(b, 0.0)) return num_node(0.0);
    if (is_num(b, 1.0)) return a;
    return mk_bin(ExprKind::Div, std::move(a), std::move(b));
}

NodePtr mk_pow(NodePtr a, NodePtr b) {
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number) {
        const double v = std::pow(a->number, b->number);
        if (std::isfinite(v)) return num_node(v);
    }
    if (is_num(b, 1.0)) return a;
    if (is_num(b, 0.0)) return num_node(1.0);
    return mk_bin(ExprKind::Pow, std::move(a), std::move(b));
}

NodePtr mk_call(Func f, NodePtr a) {
    if (a->kind == ExprKind::Number && !is_delta_family(f)) {
        const double x = a->number;
        double v = 0.0;
        bool ok = true;
        switch (f) {
            case Func::Sin: v = std::sin(x); break;
            case Func::Cos: v = std::cos(x); break;
            case Func::Exp: v = std::exp(x); break;
            case Func::Tanh: v = std::tanh(x); break;
            case Func::Log: ok = x > 0.0; v = ok ? std::log(x) : 0.0; break;
            case Func::Sqrt: ok = x >= 0.0; v = ok ? std::sqrt(x) : 0.0; break;
            case Func::Heaviside: v = x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); break;
            case Func::Pos: v = x > 0.0 ? x : 0.0; break;
            default: ok = false; break;
        }
        if (ok && std::isfinite(v)) return num_node(v);
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Call;
    n->func = f;
    n->a = std::move(a);
    return n;
}

} // namespace

Expr make_expr(std::shared_ptr<const ExprNode> n) { return Expr(std::move(n)); }

Expr Expr::number(double v) { return make_expr(num_node(v)); }

Expr Expr::variable(const std::string& name) {
    auto n = mk(ExprKind::Variable);
    const_cast<ExprNode*>(n.get())->name = name;
    return make_expr(n);
}

Expr Expr::call(Func f, const Expr& arg) { return make_expr(mk_call(f, arg.ptr())); }

Expr operator+(const Expr& a, const Expr& b) { return make_expr(mk_add(a.ptr(), b.ptr())); }
Expr operator-(const Expr& a, const Expr& b) { return make_expr(mk_sub(a.ptr(), b.ptr())); }
Expr operator*(const Expr& a, const Expr& b) { return make_expr(mk_mul(a.ptr(), b.ptr())); }
Expr operator/(const Expr& a, const Expr& b) { return make_expr(mk_div(a.ptr(), b.ptr())); }
Expr operator-(const Expr& a) { return make_expr(mk_neg(a.ptr())); }
Expr Expr::pow(const Expr& e) const { return make_expr(mk_pow(node_, e.ptr())); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void eval_fail(const std::string& what, const Bindings& b) {
    throw EvalError(what + " [" + b.snapshot() + "]");
}

double eval_node(const ExprNode* n, const Bindings& b) {
    switch (n->kind) {
        case ExprKind::Number:
            return n->number;
        case ExprKind::Variable: {
            if (n->name == "eps") return b.eps;
            for (std::size_t i = 0; i < b.names.size(); ++i)
                if (b.names[i] == n->name) return b.values[i];
            eval_fail("unbound variable '" + n->name + "'", b);
        }
        case ExprKind::Add:
            return eval_node(n->a.get(), b) + eval_node(n->b.get(), b);
        case ExprKind::Sub:
            return eval_node(n->a.get(), b) - eval_node(n->b.get(), b);
        case ExprKind::Mul:
            return eval_node(n->a.get(), b) * eval_node(n->b.get(), b);
        case ExprKind::Div: {
            const double den = eval_node(n->b.get(), b);
            if (den == 0.0) eval_fail("division by zero", b);
            return eval_node(n->a.get(), b) / den;
        }
        case ExprKind::Pow: {
            const double base = eval_node(n->a.get(), b);
            const double ex = eval_node(n->b.get(), b);
            const double v = std::pow(base, ex);
            if (std::isnan(v)) eval_fail("pow domain error", b);
            return v;
        }
        case ExprKind::Neg:
            return -eval_node(n->a.get(), b);
        case ExprKind::Call: {
            const double x = eval_node(n->a.get(), b);
            switch (n->func) {
                case Func::Sin: return std::sin(x);
                case Func::Cos: return std::cos(x);
                case Func::Exp: return std::exp(x);
                case Func::Tanh: return std::tanh(x);
                case Func::Log:
                    if (x <= 0.0) eval_fail("log of non-positive value", b);
                    return std::log(x);
                case Func::Sqrt:
                    if (x < 0.0) eval_fail("sqrt of negative value", b);
                    return std::sqrt(x);
                case Func::Heaviside: return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5);
                case Func::Pos: return x > 0.0 ? x : 0.0;
                case Func::Delta:
                case Func::Delta1:
                case Func::Delta2: {
                    if (!b.delta) eval_fail("no active delta net", b);
                    const int order = n->func == Func::Delta ? 0 : (n->func == Func::Delta1 ? 1 : 2);
                    return b.delta->evaluate(order, x, b.eps);
                }
            }
            eval_fail("unknown function", b);
        }
    }
    eval_fail("corrupt expression node", b);
}

} // namespace

double Expr::evaluate(const Bindings& b) const {
    if (!node_) throw EvalError("evaluate called on empty expression");
    const double v = eval_node(node_.get(), b);
    if (!std::isfinite(v)) eval_fail("non-finite result", b);
    return v;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

NodePtr diff_node(const NodePtr& n, const std::string& var);

NodePtr diff_call(const NodePtr& n, const std::string& var) {
    const NodePtr& u = n->a;
    NodePtr du = diff_node(u, var);
    // Argument independent of var: the chain rule yields zero before the
    // outer derivative (and its order cap) ever comes into play.
    if (is_num(du, 0.0)) return du;
    NodePtr outer;
    switch (n->func) {
        case Func::Sin: outer = mk_call(Func::Cos, u); break;
        case Func::Cos: outer = mk_neg(mk_call(Func::Sin, u)); break;
        case Func::Exp: outer = mk_call(Func::Exp, u); break;
        case Func::Log: outer = mk_div(num_node(1.0), u); break;
        case Func::Sqrt:
            outer = mk_div(num_node(1.0), mk_mul(num_node(2.0), mk_call(Func::Sqrt, u)));
            break;
        case Func::Tanh: {
            NodePtr t = mk_call(Func::Tanh, u);
            outer = mk_sub(num_node(1.0), mk_mul(t, t));
            break;
        }
        case Func::Delta: outer = mk_call(Func::Delta1, u); break;
        case Func::Delta1: outer = mk_call(Func::Delta2, u); break;
        case Func::Delta2:
            throw ConfigError("cannot differentiate delta2: derivative order on delta nets is capped at 2");
        case Func::Heaviside:
        case Func::Pos:
            throw ConfigError(std::string("cannot differentiate reference-only symbol '") +
                              func_name(n->func) + "'");
    }
    return mk_mul(outer, std::move(du));
}

NodePtr diff_node(const NodePtr& n, const std::string& var) {
    switch (n->kind) {
        case ExprKind::Number:
            return num_node(0.0);
        case ExprKind::Variable:
            return num_node(n->name == var ? 1.0 : 0.0);
        case ExprKind::Add:
            return mk_add(diff_node(n->a, var), diff_node(n->b, var));
        case ExprKind::Sub:
            return mk_sub(diff_node(n->a, var), diff_node(n->b, var));
        case ExprKind::Mul:
            return mk_add(mk_mul(diff_node(n->a, var), n->b), mk_mul(n->a, diff_node(n->b, var)));
        case ExprKind::Div:
            // (a/b)' = a'/b - a b'/b^2
            return mk_sub(mk_div(diff_node(n->a, var), n->b),
                          mk_div(mk_mul(n->a, diff_node(n->b, var)), mk_mul(n->b, n->b)));
        case ExprKind::Pow: {
            const NodePtr& base = n->a;
            const NodePtr& ex = n->b;
            if (ex->kind == ExprKind::Number) {
                // d(a^c) = c a^(c-1) a'
                return mk_mul(mk_mul(ex, mk_pow(base, num_node(ex->number - 1.0))),
                              diff_node(base, var));
            }
            // General a^b = exp(b log a): d = a^b (b' log a + b a'/a)
            NodePtr term = mk_add(mk_mul(diff_node(ex, var), mk_call(Func::Log, base)),
                                  mk_div(mk_mul(ex, diff_node(base, var)), base));
            return mk_mul(mk_pow(base, ex), std::move(term));
        }
        case ExprKind::Neg:
            return mk_neg(diff_node(n->a, var));
        case ExprKind::Call:
            return diff_call(n, var);
    }
    throw ConfigError("corrupt expression node in differentiate");
}

} // namespace

Expr Expr::differentiate(const std::string& var) const {
    if (!node_) throw ConfigError("differentiate called on empty expression");
    return make_expr(diff_node(node_, var));
}

// ---------------------------------------------------------------------------
// Structure queries

namespace {

template <class Fn>
void walk(const ExprNode* n, Fn&& fn) {
    fn(n);
    if (n->a) walk(n->a.get(), fn);
    if (n->b) walk(n->b.get(), fn);
}

} // namespace

std::set<std::string> Expr::free_variables() const {
    std::set<std::string> out;
    if (!node_) return out;
    walk(node_.get(), [&](const ExprNode* n) {
        if (n->kind == ExprKind::Variable && n->name != "eps") out.insert(n->name);
    });
    return out;
}

bool Expr::references_eps() const {
    bool found = false;
    if (!node_) return false;
    walk(node_.get(), [&](const ExprNode* n) {
        if (n->kind == ExprKind::Variable && n->name == "eps") found = true;
        if (n->kind == ExprKind::Call && is_delta_family(n->func)) found = true;
    });
    return found;
}

bool Expr::references_delta() const {
    bool found = false;
    if (!node_) return false;
    walk(node_.get(), [&](const ExprNode* n) {
        if (n->kind == ExprKind::Call && is_delta_family(n->func)) found = true;
    });
    return found;
}

bool Expr::references_singular() const {
    bool found = false;
    if (!node_) return false;
    walk(node_.get(), [&](const ExprNode* n) {
        if (n->kind == ExprKind::Call && is_singular(n->func)) found = true;
    });
    return found;
}

bool Expr::references_heaviside_pos() const {
    bool found = false;
    if (!node_) return false;
    walk(node_.get(), [&](const ExprNode* n) {
        if (n->kind == ExprKind::Call && (n->func == Func::Heaviside || n->func == Func::Pos))
            found = true;
    });
    return found;
}

int Expr::max_delta_order() const {
    int order = -1;
    if (!node_) return order;
    walk(node_.get(), [&](const ExprNode* n) {
        if (n->kind != ExprKind::Call) return;
        if (n->func == Func::Delta) order = std::max(order, 0);
        if (n->func == Func::Delta1) order = std::max(order, 1);
        if (n->func == Func::Delta2) order = std::max(order, 2);
    });
    return order;
}

std::vector<Expr> Expr::delta_arguments() const {
    std::vector<Expr> out;
    if (!node_) return out;
    walk(node_.get(), [&](const ExprNode* n) {
        if (n->kind == ExprKind::Call && is_delta_family(n->func)) {
            for (const Expr& e : out)
                if (e.ptr() == n->a) return;
            out.push_back(make_expr(n->a));
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const ExprNode* n) {
    switch (n->kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        case ExprKind::Pow: return 4;
        default: return 5;
    }
}

void print_node(std::ostream& os, const ExprNode* n, int parent_prec) {
    const int prec = precedence(n);
    const bool paren = prec < parent_prec;
    if (paren) os << '(';
    switch (n->kind) {
        case ExprKind::Number: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n->number;
            os << tmp.str();
            break;
        }
        case ExprKind::Variable: os << n->name; break;
        case ExprKind::Add:
            print_node(os, n->a.get(), prec);
            os << " + ";
            print_node(os, n->b.get(), prec + 1);
            break;
        case ExprKind::Sub:
            print_node(os, n->a.get(), prec);
            os << " - ";
            print_node(os, n->b.get(), prec + 1);
            break;
        case ExprKind::Mul:
            print_node(os, n->a.get(), prec);
            os << "*";
            print_node(os, n->b.get(), prec + 1);
            break;
        case ExprKind::Div:
            print_node(os, n->a.get(), prec);
            os << "/";
            print_node(os, n->b.get(), prec + 1);
            break;
        case ExprKind::Neg:
            os << "-";
            print_node(os, n->a.get(), prec + 1);
            break;
        case ExprKind::Pow:
            print_node(os, n->a.get(), prec + 1);
            os << "^";
            print_node(os, n->b.get(), prec);
            break;
        case ExprKind::Call:
            os << func_name(n->func) << '(';
            print_node(os, n->a.get(), 0);
            os << ')';
            break;
    }
    if (paren) os << ')';
}

} // namespace

std::string Expr::to_string() const {
    if (!node_) return "<empty>";
    std::ostringstream os;
    print_node(os, node_.get(), 0);
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw ConfigError("empty expression");
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr e = parse_term();
        for (;;) {
            if (eat('+')) e = mk_add(e, parse_term());
            else if (eat('-')) e = mk_sub(e, parse_term());
            else return e;
        }
    }

    NodePtr parse_term() {
        NodePtr e = parse_factor();
        for (;;) {
            if (eat('*')) e = mk_mul(e, parse_factor());
            else if (eat('/')) e = mk_div(e, parse_factor());
            else return e;
        }
    }

    NodePtr parse_factor() {
        if (eat('-')) return mk_neg(parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) return mk_pow(std::move(base), parse_factor());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected operand");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(text_.substr(start, pos_ - start), &used);
            if (used != pos_ - start) fail("bad number literal");
            return num_node(v);
        } catch (const std::exception&) {
            fail("bad number literal");
        }
    }

    NodePtr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        static const std::pair<const char*, Func> kFuncs[] = {
            {"sin", Func::Sin},       {"cos", Func::Cos},     {"exp", Func::Exp},
            {"log", Func::Log},       {"sqrt", Func::Sqrt},   {"tanh", Func::Tanh},
            {"delta", Func::Delta},   {"delta1", Func::Delta1}, {"delta2", Func::Delta2},
            {"heaviside", Func::Heaviside}, {"pos", Func::Pos},
        };
        for (const auto& [fname, f] : kFuncs) {
            if (name == fname) {
                if (!eat('(')) fail("'" + name + "' is a reserved function and needs '('");
                NodePtr arg = parse_expr();
                if (!eat(')')) fail("expected ')' after argument of '" + name + "'");
                return mk_call(f, std::move(arg));
            }
        }
        if (peek() == '(') fail("unknown function '" + name + "'");
        auto n = std::make_shared<ExprNode>();
        const_cast<ExprNode*>(n.get())->kind = ExprKind::Variable;
        const_cast<ExprNode*>(n.get())->name = name;
        return n;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

bool subtree_has_singular(const ExprNode* n) {
    bool found = false;
    walk(n, [&](const ExprNode* m) {
        if (m->kind == ExprKind::Call && is_singular(m->func)) found = true;
    });
    return found;
}

void validate_no_nested_singular(const ExprNode* n) {
    walk(n, [&](const ExprNode* m) {
        if (m->kind == ExprKind::Call && is_delta_family(m->func) &&
            subtree_has_singular(m->a.get()))
            throw ConfigError(std::string("singular symbol nested inside the argument of '") +
                              func_name(m->func) + "'");
    });
}

} // namespace

Expr parse_expr(const std::string& text) {
    if (text.empty()) throw ConfigError("empty expression");
    Parser p(text);
    NodePtr n = p.parse();
    validate_no_nested_singular(n.get());
    return make_expr(std::move(n));
}

} // namespace gengeo
