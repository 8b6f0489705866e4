#pragma once

#include "cfheat/error.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cfheat::expr {

enum class Variable { t, x };

enum class Kind {
    number,
    pi,
    var_t,
    var_x,
    negate,
    add,
    subtract,
    multiply,
    divide,
    power,  // integer exponent stored on the node
    sin,
    cos,
    exp,
};

struct Node;

/// Immutable expression tree in t and x.
///
/// Grammar: numbers, `pi`, `t`, `x`, unary minus, + - * /, `^` with a
/// nonnegative integer literal exponent, and sin/cos/exp applications.
/// Copies share structure.
class Expr {
public:
    Expr();  // the literal 0

    Kind kind() const noexcept;
    double value() const noexcept;     // number literal value
    int exponent() const noexcept;     // power exponent
    const Expr& lhs() const noexcept;  // operand of unary nodes too
    const Expr& rhs() const noexcept;

    bool is_number() const noexcept { return kind() == Kind::number; }
    bool is_number(double v) const noexcept { return is_number() && value() == v; }

    // Raw constructors: no folding.
    static Expr number(double v);
    static Expr pi();
    static Expr variable(Variable v);
    static Expr unary(Kind k, Expr operand);
    static Expr binary(Kind k, Expr a, Expr b);
    static Expr power(Expr base, int exponent);

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind = Kind::number;
    double value = 0.0;
    int exponent = 0;
    Expr a;
    Expr b;
};

/// Recursive-descent parse. Throws ParseError carrying the byte offset.
Expr parse(std::string_view text);

/// Strict evaluation; division by zero throws EvalError.
double eval(const Expr& e, double t, double x);

/// Constant folding: 0*e -> 0, 1*e -> e, e+0 -> e, literal arithmetic, ...
Expr fold(const Expr& e);

enum class Folding { on, off };

/// order-th symbolic derivative (1 <= order <= 6) by product, chain and power
/// rules, folded unless `folding` is off.
Expr differentiate(const Expr& e, Variable var, int order = 1, Folding folding = Folding::on);

/// Text that parses back to the same tree. Numbers use the shortest
/// round-trip decimal form.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Number of nodes, mostly for tests and diagnostics.
std::size_t node_count(const Expr& e);

/// Flattened postfix program for repeated evaluation on grids.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    double operator()(double t, double x) const;
    bool is_zero() const noexcept;

private:
    struct Op {
        Kind kind;
        double value;
        int exponent;
    };
    std::vector<Op> ops_;
    std::size_t max_depth_ = 0;
};

}  // namespace cfheat::expr
