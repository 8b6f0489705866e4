#include "cfheat/expr.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace cfheat::expr {

namespace {

// expr    := term (('+' | '-') term)*
// term    := unary (('*' | '/') unary)*
// unary   := '-' unary | power
// power   := primary ('^' integer)?
// primary := number | 'pi' | 't' | 'x' | ('sin'|'cos'|'exp') '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        Expr e = expression();
        skip_space();
        if (pos_ < text_.size()) {
            fail(std::string("unexpected character '") + text_[pos_] + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr expression() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(Kind::add, std::move(lhs), term());
            } else if (accept('-')) {
                lhs = Expr::binary(Kind::subtract, std::move(lhs), term());
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(Kind::multiply, std::move(lhs), unary());
            } else if (accept('/')) {
                lhs = Expr::binary(Kind::divide, std::move(lhs), unary());
            } else {
                return lhs;
            }
        }
    }

    Expr unary() {
        if (accept('-')) {
            return Expr::unary(Kind::negate, unary());
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) {
            return base;
        }
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == start || (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' ||
                                                      text_[pos_] == 'E'))) {
            pos_ = start;
            fail("expected nonnegative integer exponent");
        }
        int n = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, n);
        if (ec != std::errc{} || n > 64) {
            pos_ = start;
            fail("exponent out of range (at most 64)");
        }
        (void)ptr;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '^') {
            fail("chained exponent; use parentheses");
        }
        return Expr::power(std::move(base), n);
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("expected expression");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            return identifier();
        }
        if (c == '(') {
            ++pos_;
            Expr inner = expression();
            expect(')');
            return inner;
        }
        fail("expected expression");
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            const std::size_t exp_start = pos_;
            digits();
            if (pos_ == exp_start) {
                pos_ = save;  // not an exponent; leave 'e' for the caller
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc{} || ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return Expr::number(v);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "pi") {
            return Expr::pi();
        }
        if (name == "t") {
            return Expr::variable(Variable::t);
        }
        if (name == "x") {
            return Expr::variable(Variable::x);
        }
        Kind fn;
        if (name == "sin") {
            fn = Kind::sin;
        } else if (name == "cos") {
            fn = Kind::cos;
        } else if (name == "exp") {
            fn = Kind::exp;
        } else {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        expect('(');
        Expr arg = expression();
        expect(')');
        return Expr::unary(fn, std::move(arg));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace cfheat::expr
