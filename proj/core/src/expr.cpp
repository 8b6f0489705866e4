#include "cfheat/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace cfheat::expr {

namespace {

const Expr& empty_expr() {
    static const Expr e;
    return e;
}

double int_power(double base, int n) {
    double result = 1.0;
    while (n > 0) {
        if (n & 1) {
            result *= base;
        }
        base *= base;
        n >>= 1;
    }
    return result;
}

bool is_unary(Kind k) {
    return k == Kind::negate || k == Kind::sin || k == Kind::cos || k == Kind::exp ||
           k == Kind::power;
}

bool is_binary(Kind k) {
    return k == Kind::add || k == Kind::subtract || k == Kind::multiply || k == Kind::divide;
}

}  // namespace

// A null node stands for the literal 0 so that Node can hold Expr members.
Expr::Expr() = default;

Kind Expr::kind() const noexcept { return node_ ? node_->kind : Kind::number; }
double Expr::value() const noexcept { return node_ ? node_->value : 0.0; }
int Expr::exponent() const noexcept { return node_ ? node_->exponent : 0; }
const Expr& Expr::lhs() const noexcept { return node_ ? node_->a : empty_expr(); }
const Expr& Expr::rhs() const noexcept { return node_ ? node_->b : empty_expr(); }

Expr Expr::number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::pi() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::pi;
    return Expr(std::move(n));
}

Expr Expr::variable(Variable v) {
    auto n = std::make_shared<Node>();
    n->kind = v == Variable::t ? Kind::var_t : Kind::var_x;
    return Expr(std::move(n));
}

Expr Expr::unary(Kind k, Expr operand) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(operand);
    return Expr(std::move(n));
}

Expr Expr::binary(Kind k, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::power;
    n->a = std::move(base);
    n->exponent = exponent;
    return Expr(std::move(n));
}

double eval(const Expr& e, double t, double x) {
    switch (e.kind()) {
    case Kind::number: return e.value();
    case Kind::pi: return std::numbers::pi;
    case Kind::var_t: return t;
    case Kind::var_x: return x;
    case Kind::negate: return -eval(e.lhs(), t, x);
    case Kind::add: return eval(e.lhs(), t, x) + eval(e.rhs(), t, x);
    case Kind::subtract: return eval(e.lhs(), t, x) - eval(e.rhs(), t, x);
    case Kind::multiply: return eval(e.lhs(), t, x) * eval(e.rhs(), t, x);
    case Kind::divide: {
        const double num = eval(e.lhs(), t, x);
        const double den = eval(e.rhs(), t, x);
        if (den == 0.0) {
            throw EvalError("division by zero in '" + to_string(e) + "'");
        }
        return num / den;
    }
    case Kind::power: return int_power(eval(e.lhs(), t, x), e.exponent());
    case Kind::sin: return std::sin(eval(e.lhs(), t, x));
    case Kind::cos: return std::cos(eval(e.lhs(), t, x));
    case Kind::exp: return std::exp(eval(e.lhs(), t, x));
    }
    return 0.0;
}

// ---------------------------------------------------------------- folding

namespace {

Expr literal_or(double v, Expr fallback) {
    return std::isfinite(v) ? Expr::number(v) : std::move(fallback);
}

Expr make_negate(Expr a) {
    if (a.is_number()) {
        return Expr::number(-a.value());
    }
    if (a.kind() == Kind::negate) {
        return a.lhs();
    }
    return Expr::unary(Kind::negate, std::move(a));
}

Expr make_add(Expr a, Expr b) {
    if (a.is_number() && b.is_number()) {
        return literal_or(a.value() + b.value(), Expr::binary(Kind::add, a, b));
    }
    if (a.is_number(0.0)) {
        return b;
    }
    if (b.is_number(0.0)) {
        return a;
    }
    return Expr::binary(Kind::add, std::move(a), std::move(b));
}

Expr make_subtract(Expr a, Expr b) {
    if (a.is_number() && b.is_number()) {
        return literal_or(a.value() - b.value(), Expr::binary(Kind::subtract, a, b));
    }
    if (b.is_number(0.0)) {
        return a;
    }
    if (a.is_number(0.0)) {
        return make_negate(std::move(b));
    }
    return Expr::binary(Kind::subtract, std::move(a), std::move(b));
}

Expr make_multiply(Expr a, Expr b) {
    if (a.is_number() && b.is_number()) {
        return literal_or(a.value() * b.value(), Expr::binary(Kind::multiply, a, b));
    }
    if (a.is_number(0.0) || b.is_number(0.0)) {
        return Expr::number(0.0);
    }
    if (a.is_number(1.0)) {
        return b;
    }
    if (b.is_number(1.0)) {
        return a;
    }
    if (a.is_number(-1.0)) {
        return make_negate(std::move(b));
    }
    if (b.is_number(-1.0)) {
        return make_negate(std::move(a));
    }
    return Expr::binary(Kind::multiply, std::move(a), std::move(b));
}

Expr make_divide(Expr a, Expr b) {
    if (a.is_number() && b.is_number() && b.value() != 0.0) {
        return literal_or(a.value() / b.value(), Expr::binary(Kind::divide, a, b));
    }
    if (b.is_number(1.0)) {
        return a;
    }
    if (a.is_number(0.0) && b.is_number() && b.value() != 0.0) {
        return Expr::number(0.0);
    }
    return Expr::binary(Kind::divide, std::move(a), std::move(b));
}

Expr make_power(Expr base, int n) {
    if (n == 0) {
        return Expr::number(1.0);
    }
    if (n == 1) {
        return base;
    }
    if (base.is_number()) {
        return literal_or(int_power(base.value(), n), Expr::power(base, n));
    }
    return Expr::power(std::move(base), n);
}

Expr make_function(Kind k, Expr a) {
    if (a.is_number()) {
        const double v = a.value();
        const double r = k == Kind::sin ? std::sin(v) : k == Kind::cos ? std::cos(v) : std::exp(v);
        return literal_or(r, Expr::unary(k, a));
    }
    return Expr::unary(k, std::move(a));
}

struct Builder {
    bool folding;

    Expr negate(Expr a) const {
        return folding ? make_negate(std::move(a)) : Expr::unary(Kind::negate, std::move(a));
    }
    Expr add(Expr a, Expr b) const {
        return folding ? make_add(std::move(a), std::move(b))
                       : Expr::binary(Kind::add, std::move(a), std::move(b));
    }
    Expr subtract(Expr a, Expr b) const {
        return folding ? make_subtract(std::move(a), std::move(b))
                       : Expr::binary(Kind::subtract, std::move(a), std::move(b));
    }
    Expr multiply(Expr a, Expr b) const {
        return folding ? make_multiply(std::move(a), std::move(b))
                       : Expr::binary(Kind::multiply, std::move(a), std::move(b));
    }
    Expr divide(Expr a, Expr b) const {
        return folding ? make_divide(std::move(a), std::move(b))
                       : Expr::binary(Kind::divide, std::move(a), std::move(b));
    }
    Expr power(Expr a, int n) const {
        return folding ? make_power(std::move(a), n) : Expr::power(std::move(a), n);
    }
    Expr function(Kind k, Expr a) const {
        return folding ? make_function(k, std::move(a)) : Expr::unary(k, std::move(a));
    }
};

Expr derive(const Expr& e, Variable var, const Builder& b) {
    switch (e.kind()) {
    case Kind::number:
    case Kind::pi:
        return Expr::number(0.0);
    case Kind::var_t:
        return Expr::number(var == Variable::t ? 1.0 : 0.0);
    case Kind::var_x:
        return Expr::number(var == Variable::x ? 1.0 : 0.0);
    case Kind::negate:
        return b.negate(derive(e.lhs(), var, b));
    case Kind::add:
        return b.add(derive(e.lhs(), var, b), derive(e.rhs(), var, b));
    case Kind::subtract:
        return b.subtract(derive(e.lhs(), var, b), derive(e.rhs(), var, b));
    case Kind::multiply:
        return b.add(b.multiply(derive(e.lhs(), var, b), e.rhs()),
                     b.multiply(e.lhs(), derive(e.rhs(), var, b)));
    case Kind::divide:
        return b.divide(b.subtract(b.multiply(derive(e.lhs(), var, b), e.rhs()),
                                   b.multiply(e.lhs(), derive(e.rhs(), var, b))),
                        b.power(e.rhs(), 2));
    case Kind::power: {
        const int n = e.exponent();
        if (n == 0) {
            return Expr::number(0.0);
        }
        return b.multiply(b.multiply(Expr::number(n), b.power(e.lhs(), n - 1)),
                          derive(e.lhs(), var, b));
    }
    case Kind::sin:
        return b.multiply(b.function(Kind::cos, e.lhs()), derive(e.lhs(), var, b));
    case Kind::cos:
        return b.multiply(b.negate(b.function(Kind::sin, e.lhs())), derive(e.lhs(), var, b));
    case Kind::exp:
        return b.multiply(b.function(Kind::exp, e.lhs()), derive(e.lhs(), var, b));
    }
    return Expr::number(0.0);
}

}  // namespace

Expr fold(const Expr& e) {
    switch (e.kind()) {
    case Kind::number:
    case Kind::pi:
    case Kind::var_t:
    case Kind::var_x:
        return e;
    case Kind::negate: return make_negate(fold(e.lhs()));
    case Kind::add: return make_add(fold(e.lhs()), fold(e.rhs()));
    case Kind::subtract: return make_subtract(fold(e.lhs()), fold(e.rhs()));
    case Kind::multiply: return make_multiply(fold(e.lhs()), fold(e.rhs()));
    case Kind::divide: return make_divide(fold(e.lhs()), fold(e.rhs()));
    case Kind::power: return make_power(fold(e.lhs()), e.exponent());
    case Kind::sin:
    case Kind::cos:
    case Kind::exp:
        return make_function(e.kind(), fold(e.lhs()));
    }
    return e;
}

Expr differentiate(const Expr& e, Variable var, int order, Folding folding) {
    if (order < 1 || order > 6) {
        throw DerivativeOrderError("symbolic derivative order must be in 1..6, got " +
                                   std::to_string(order));
    }
    const Builder builder{folding == Folding::on};
    Expr result = e;
    for (int i = 0; i < order; ++i) {
        result = derive(result, var, builder);
    }
    return result;
}

// ---------------------------------------------------------------- printing

namespace {

int precedence(const Expr& e) {
    switch (e.kind()) {
    case Kind::add:
    case Kind::subtract:
        return 1;
    case Kind::multiply:
    case Kind::divide:
        return 2;
    case Kind::negate:
        return 3;
    case Kind::power:
        return 4;
    case Kind::number:
        return e.value() < 0.0 || std::signbit(e.value()) ? 3 : 5;
    default:
        return 5;
    }
}

std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

void print(const Expr& e, int min_prec, std::string& out) {
    const bool parens = precedence(e) < min_prec;
    if (parens) {
        out += '(';
    }
    switch (e.kind()) {
    case Kind::number: out += format_number(e.value()); break;
    case Kind::pi: out += "pi"; break;
    case Kind::var_t: out += 't'; break;
    case Kind::var_x: out += 'x'; break;
    case Kind::negate:
        out += '-';
        print(e.lhs(), 3, out);
        break;
    case Kind::add:
    case Kind::subtract:
        print(e.lhs(), 1, out);
        out += e.kind() == Kind::add ? "+" : "-";
        print(e.rhs(), 2, out);
        break;
    case Kind::multiply:
    case Kind::divide:
        print(e.lhs(), 2, out);
        out += e.kind() == Kind::multiply ? "*" : "/";
        print(e.rhs(), 3, out);
        break;
    case Kind::power:
        print(e.lhs(), 5, out);
        out += '^';
        out += std::to_string(e.exponent());
        break;
    case Kind::sin:
    case Kind::cos:
    case Kind::exp:
        out += e.kind() == Kind::sin ? "sin(" : e.kind() == Kind::cos ? "cos(" : "exp(";
        print(e.lhs(), 0, out);
        out += ')';
        break;
    }
    if (parens) {
        out += ')';
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, 0, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case Kind::number: return a.value() == b.value();
    case Kind::pi:
    case Kind::var_t:
    case Kind::var_x:
        return true;
    case Kind::power:
        return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
    default:
        break;
    }
    if (is_binary(a.kind())) {
        return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    }
    return structurally_equal(a.lhs(), b.lhs());
}

std::size_t node_count(const Expr& e) {
    if (is_binary(e.kind())) {
        return 1 + node_count(e.lhs()) + node_count(e.rhs());
    }
    if (is_unary(e.kind())) {
        return 1 + node_count(e.lhs());
    }
    return 1;
}

// ---------------------------------------------------------------- compiled form

namespace {

template <class Emit>
void flatten(const Expr& e, Emit&& emit) {
    if (is_binary(e.kind())) {
        flatten(e.lhs(), emit);
        flatten(e.rhs(), emit);
    } else if (is_unary(e.kind())) {
        flatten(e.lhs(), emit);
    }
    emit(e);
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) {
    std::size_t depth = 0;
    flatten(e, [&](const Expr& node) {
        ops_.push_back({node.kind(), node.value(), node.exponent()});
        if (is_binary(node.kind())) {
            --depth;
        } else if (!is_unary(node.kind())) {
            ++depth;
            max_depth_ = std::max(max_depth_, depth);
        }
    });
}

bool CompiledExpr::is_zero() const noexcept {
    return ops_.empty() || (ops_.size() == 1 && ops_[0].kind == Kind::number && ops_[0].value == 0.0);
}

double CompiledExpr::operator()(double t, double x) const {
    if (ops_.empty()) {
        return 0.0;
    }
    std::array<double, 64> fixed{};
    std::vector<double> heap;
    double* stack = fixed.data();
    if (max_depth_ > fixed.size()) {
        heap.resize(max_depth_);
        stack = heap.data();
    }
    std::size_t top = 0;
    for (const Op& op : ops_) {
        switch (op.kind) {
        case Kind::number: stack[top++] = op.value; break;
        case Kind::pi: stack[top++] = std::numbers::pi; break;
        case Kind::var_t: stack[top++] = t; break;
        case Kind::var_x: stack[top++] = x; break;
        case Kind::negate: stack[top - 1] = -stack[top - 1]; break;
        case Kind::add: --top; stack[top - 1] += stack[top]; break;
        case Kind::subtract: --top; stack[top - 1] -= stack[top]; break;
        case Kind::multiply: --top; stack[top - 1] *= stack[top]; break;
        case Kind::divide:
            --top;
            if (stack[top] == 0.0) {
                throw EvalError("division by zero");
            }
            stack[top - 1] /= stack[top];
            break;
        case Kind::power: stack[top - 1] = int_power(stack[top - 1], op.exponent); break;
        case Kind::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
        case Kind::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
        case Kind::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
        }
    }
    return stack[0];
}

}  // namespace cfheat::expr
