#include "geocensus/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace geocensus {

ExprPtr Expr::make(ExprOp op, double value, int exponent, ExprPtr lhs, ExprPtr rhs) {
    return ExprPtr(new Expr(op, value, exponent, std::move(lhs), std::move(rhs)));
}

ExprPtr Expr::constant(double v) { return make(ExprOp::Constant, v, 0, nullptr, nullptr); }
ExprPtr Expr::var() { return make(ExprOp::Var, 0, 0, nullptr, nullptr); }
ExprPtr Expr::add(ExprPtr a, ExprPtr b) { return make(ExprOp::Add, 0, 0, std::move(a), std::move(b)); }
ExprPtr Expr::sub(ExprPtr a, ExprPtr b) { return make(ExprOp::Sub, 0, 0, std::move(a), std::move(b)); }
ExprPtr Expr::mul(ExprPtr a, ExprPtr b) { return make(ExprOp::Mul, 0, 0, std::move(a), std::move(b)); }
ExprPtr Expr::div(ExprPtr a, ExprPtr b) { return make(ExprOp::Div, 0, 0, std::move(a), std::move(b)); }
ExprPtr Expr::neg(ExprPtr a) { return make(ExprOp::Neg, 0, 0, std::move(a), nullptr); }
ExprPtr Expr::pow(ExprPtr base, int exponent) {
    return make(ExprOp::Pow, 0, exponent, std::move(base), nullptr);
}
ExprPtr Expr::sin(ExprPtr a) { return make(ExprOp::Sin, 0, 0, std::move(a), nullptr); }
ExprPtr Expr::cos(ExprPtr a) { return make(ExprOp::Cos, 0, 0, std::move(a), nullptr); }
ExprPtr Expr::exp(ExprPtr a) { return make(ExprOp::Exp, 0, 0, std::move(a), nullptr); }
ExprPtr Expr::sqrt(ExprPtr a) { return make(ExprOp::Sqrt, 0, 0, std::move(a), nullptr); }

namespace {

double ipow(double base, int n) {
    if (n < 0) return 1.0 / ipow(base, -n);
    double r = 1.0, p = base;
    for (int k = n; k > 0; k >>= 1) {
        if (k & 1) r *= p;
        p *= p;
    }
    return r;
}

}  // namespace

double Expr::eval(double s) const noexcept {
    switch (op_) {
        case ExprOp::Constant: return value_;
        case ExprOp::Var: return s;
        case ExprOp::Add: return lhs_->eval(s) + rhs_->eval(s);
        case ExprOp::Sub: return lhs_->eval(s) - rhs_->eval(s);
        case ExprOp::Mul: return lhs_->eval(s) * rhs_->eval(s);
        case ExprOp::Div: return lhs_->eval(s) / rhs_->eval(s);
        case ExprOp::Neg: return -lhs_->eval(s);
        case ExprOp::Pow: return ipow(lhs_->eval(s), exponent_);
        case ExprOp::Sin: return std::sin(lhs_->eval(s));
        case ExprOp::Cos: return std::cos(lhs_->eval(s));
        case ExprOp::Exp: return std::exp(lhs_->eval(s));
        case ExprOp::Sqrt: return std::sqrt(lhs_->eval(s));
    }
    return std::nan("");
}

double Expr::eval_checked(double s) const {
    double v = 0.0;
    switch (op_) {
        case ExprOp::Constant: v = value_; break;
        case ExprOp::Var: v = s; break;
        case ExprOp::Add: v = lhs_->eval_checked(s) + rhs_->eval_checked(s); break;
        case ExprOp::Sub: v = lhs_->eval_checked(s) - rhs_->eval_checked(s); break;
        case ExprOp::Mul: v = lhs_->eval_checked(s) * rhs_->eval_checked(s); break;
        case ExprOp::Div: {
            double num = lhs_->eval_checked(s), den = rhs_->eval_checked(s);
            if (den == 0.0) {
                std::ostringstream os;
                os << "division by zero at s = " << s;
                throw EvalDomainError(os.str());
            }
            v = num / den;
            break;
        }
        case ExprOp::Neg: v = -lhs_->eval_checked(s); break;
        case ExprOp::Pow: {
            double base = lhs_->eval_checked(s);
            if (base == 0.0 && exponent_ < 0) {
                std::ostringstream os;
                os << "zero raised to negative power at s = " << s;
                throw EvalDomainError(os.str());
            }
            v = ipow(base, exponent_);
            break;
        }
        case ExprOp::Sin: v = std::sin(lhs_->eval_checked(s)); break;
        case ExprOp::Cos: v = std::cos(lhs_->eval_checked(s)); break;
        case ExprOp::Exp: v = std::exp(lhs_->eval_checked(s)); break;
        case ExprOp::Sqrt: {
            double arg = lhs_->eval_checked(s);
            if (arg < 0.0) {
                std::ostringstream os;
                os << "sqrt of negative value " << arg << " at s = " << s;
                throw EvalDomainError(os.str());
            }
            v = std::sqrt(arg);
            break;
        }
    }
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite value at s = " << s;
        throw EvalDomainError(os.str());
    }
    return v;
}

namespace {

bool is_const(const ExprPtr& e, double v) {
    return e->op() == ExprOp::Constant && e->value() == v;
}

// Folding constructors used by differentiation; they keep derivative trees
// small without rewriting user input.
ExprPtr fadd(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    if (a->op() == ExprOp::Constant && b->op() == ExprOp::Constant)
        return Expr::constant(a->value() + b->value());
    return Expr::add(std::move(a), std::move(b));
}

ExprPtr fneg(ExprPtr a) {
    if (a->op() == ExprOp::Constant) return Expr::constant(-a->value());
    if (a->op() == ExprOp::Neg) return a->lhs();
    return Expr::neg(std::move(a));
}

ExprPtr fsub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0)) return a;
    if (is_const(a, 0)) return fneg(std::move(b));
    if (a->op() == ExprOp::Constant && b->op() == ExprOp::Constant)
        return Expr::constant(a->value() - b->value());
    return Expr::sub(std::move(a), std::move(b));
}

ExprPtr fmul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0) || is_const(b, 0)) return Expr::constant(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    if (a->op() == ExprOp::Constant && b->op() == ExprOp::Constant)
        return Expr::constant(a->value() * b->value());
    return Expr::mul(std::move(a), std::move(b));
}

ExprPtr fdiv(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0)) return Expr::constant(0);
    if (is_const(b, 1)) return a;
    if (a->op() == ExprOp::Constant && b->op() == ExprOp::Constant && b->value() != 0)
        return Expr::constant(a->value() / b->value());
    return Expr::div(std::move(a), std::move(b));
}

ExprPtr fpow(ExprPtr base, int n) {
    if (n == 0) return Expr::constant(1);
    if (n == 1) return base;
    if (base->op() == ExprOp::Constant) return Expr::constant(ipow(base->value(), n));
    return Expr::pow(std::move(base), n);
}

}  // namespace

ExprPtr Expr::derivative() const {
    switch (op_) {
        case ExprOp::Constant: return constant(0);
        case ExprOp::Var: return constant(1);
        case ExprOp::Add: return fadd(lhs_->derivative(), rhs_->derivative());
        case ExprOp::Sub: return fsub(lhs_->derivative(), rhs_->derivative());
        case ExprOp::Mul:
            return fadd(fmul(lhs_->derivative(), rhs_), fmul(lhs_, rhs_->derivative()));
        case ExprOp::Div:
            // (u/v)' = (u'v - uv') / v^2
            return fdiv(fsub(fmul(lhs_->derivative(), rhs_), fmul(lhs_, rhs_->derivative())),
                        fpow(rhs_, 2));
        case ExprOp::Neg: return fneg(lhs_->derivative());
        case ExprOp::Pow:
            // (u^n)' = n u^(n-1) u'
            return fmul(fmul(constant(exponent_), fpow(lhs_, exponent_ - 1)),
                        lhs_->derivative());
        case ExprOp::Sin: return fmul(cos(lhs_), lhs_->derivative());
        case ExprOp::Cos: return fneg(fmul(sin(lhs_), lhs_->derivative()));
        case ExprOp::Exp: return fmul(exp(lhs_), lhs_->derivative());
        case ExprOp::Sqrt:
            // (sqrt u)' = u' / (2 sqrt u)
            return fdiv(lhs_->derivative(), fmul(constant(2), sqrt(lhs_)));
    }
    return constant(std::nan(""));
}

bool Expr::equal(const Expr& a, const Expr& b) {
    if (a.op_ != b.op_) return false;
    switch (a.op_) {
        case ExprOp::Constant: return a.value_ == b.value_;
        case ExprOp::Var: return true;
        case ExprOp::Pow: return a.exponent_ == b.exponent_ && equal(a.lhs_, b.lhs_);
        case ExprOp::Add:
        case ExprOp::Sub:
        case ExprOp::Mul:
        case ExprOp::Div:
            return equal(a.lhs_, b.lhs_) && equal(a.rhs_, b.rhs_);
        default:
            return equal(a.lhs_, b.lhs_);
    }
}

bool Expr::equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return equal(*a, *b);
}

namespace {

// Printing precedence: additive 1, multiplicative 2, unary minus 3, power 4,
// atoms 5.
int precedence(const Expr& e) {
    switch (e.op()) {
        case ExprOp::Add:
        case ExprOp::Sub: return 1;
        case ExprOp::Mul:
        case ExprOp::Div: return 2;
        case ExprOp::Neg: return 3;
        case ExprOp::Pow: return 4;
        case ExprOp::Constant:
            return e.value() < 0 ? 3 : 5;  // negative literal prints with a sign
        default: return 5;
    }
}

void format_number(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

void print(std::ostream& os, const Expr& e, int context, bool right_operand) {
    int prec = precedence(e);
    bool need_parens = prec < context || (prec == context && right_operand && context <= 2);
    if (need_parens) os << '(';
    switch (e.op()) {
        case ExprOp::Constant: format_number(os, e.value()); break;
        case ExprOp::Var: os << 's'; break;
        case ExprOp::Add:
            print(os, *e.lhs(), 1, false);
            os << " + ";
            print(os, *e.rhs(), 1, true);
            break;
        case ExprOp::Sub:
            print(os, *e.lhs(), 1, false);
            os << " - ";
            print(os, *e.rhs(), 1, true);
            break;
        case ExprOp::Mul:
            print(os, *e.lhs(), 2, false);
            os << " * ";
            print(os, *e.rhs(), 2, true);
            break;
        case ExprOp::Div:
            print(os, *e.lhs(), 2, false);
            os << " / ";
            print(os, *e.rhs(), 2, true);
            break;
        case ExprOp::Neg:
            os << '-';
            print(os, *e.lhs(), 3, true);
            break;
        case ExprOp::Pow:
            print(os, *e.lhs(), 5, false);  // base must be an atom or parenthesized
            os << '^' << e.exponent();
            break;
        case ExprOp::Sin:
            os << "sin(";
            print(os, *e.lhs(), 0, false);
            os << ')';
            break;
        case ExprOp::Cos:
            os << "cos(";
            print(os, *e.lhs(), 0, false);
            os << ')';
            break;
        case ExprOp::Exp:
            os << "exp(";
            print(os, *e.lhs(), 0, false);
            os << ')';
            break;
        case ExprOp::Sqrt:
            os << "sqrt(";
            print(os, *e.lhs(), 0, false);
            os << ')';
            break;
    }
    if (need_parens) os << ')';
}

}  // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print(os, *this, 0, false);
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser: hand-rolled tokenizer + recursive descent. Offsets are byte
// positions into the original text for error reporting.
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    double number = 0;
    std::string ident;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_ = Token{};
        current_.offset = pos_;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            return;
        }
        char c = text_[pos_];
        switch (c) {
            case '+': current_.kind = Tok::Plus; ++pos_; return;
            case '-': current_.kind = Tok::Minus; ++pos_; return;
            case '*': current_.kind = Tok::Star; ++pos_; return;
            case '/': current_.kind = Tok::Slash; ++pos_; return;
            case '^': current_.kind = Tok::Caret; ++pos_; return;
            case '(': current_.kind = Tok::LParen; ++pos_; return;
            case ')': current_.kind = Tok::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            double value = 0;
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr == begin)
                throw ParseError("malformed number literal", pos_);
            current_.kind = Tok::Number;
            current_.number = value;
            pos_ += static_cast<std::size_t>(ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            current_.kind = Tok::Ident;
            current_.ident = std::string(text_.substr(start, pos_ - start));
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End)
            throw ParseError("unexpected trailing input", t.offset);
        return e;
    }

private:
    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.next();
                e = Expr::add(e, parse_term());
            } else if (k == Tok::Minus) {
                lex_.next();
                e = Expr::sub(e, parse_term());
            } else {
                return e;
            }
        }
    }

    static bool starts_atom(Tok k) {
        return k == Tok::Number || k == Tok::Ident || k == Tok::LParen;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star) {
                lex_.next();
                e = Expr::mul(e, parse_factor());
            } else if (k == Tok::Slash) {
                lex_.next();
                e = Expr::div(e, parse_factor());
            } else if (starts_atom(k)) {
                // juxtaposition: "2s", "2 sin(s)", "sin(s)(1+s)"
                e = Expr::mul(e, parse_factor());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_factor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            return Expr::neg(parse_factor());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        while (lex_.peek().kind == Tok::Caret) {
            lex_.next();
            base = Expr::pow(base, parse_int_exponent());
        }
        return base;
    }

    int parse_int_exponent() {
        bool negative = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            negative = true;
        }
        Token t = lex_.peek();
        if (t.kind != Tok::Number)
            throw ParseError("integer exponent expected after '^'", t.offset);
        double v = t.number;
        int n = static_cast<int>(v);
        if (static_cast<double>(n) != v)
            throw ParseError("exponent must be an integer", t.offset);
        lex_.next();
        return negative ? -n : n;
    }

    ExprPtr parse_atom() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Tok::Number:
                lex_.next();
                return Expr::constant(t.number);
            case Tok::LParen: {
                lex_.next();
                ExprPtr e = parse_sum();
                Token close = lex_.peek();
                if (close.kind != Tok::RParen)
                    throw ParseError("expected ')'", close.offset);
                lex_.next();
                return e;
            }
            case Tok::Ident: {
                lex_.next();
                if (t.ident == "s") return Expr::var();
                if (t.ident == "sin" || t.ident == "cos" || t.ident == "exp" ||
                    t.ident == "sqrt") {
                    Token open = lex_.peek();
                    if (open.kind != Tok::LParen)
                        throw ParseError("expected '(' after function name '" + t.ident + "'",
                                         open.offset);
                    lex_.next();
                    ExprPtr arg = parse_sum();
                    Token close = lex_.peek();
                    if (close.kind != Tok::RParen)
                        throw ParseError("expected ')'", close.offset);
                    lex_.next();
                    if (t.ident == "sin") return Expr::sin(arg);
                    if (t.ident == "cos") return Expr::cos(arg);
                    if (t.ident == "exp") return Expr::exp(arg);
                    return Expr::sqrt(arg);
                }
                throw ParseError("unknown identifier '" + t.ident + "'", t.offset);
            }
            default:
                throw ParseError("expected a number, 's', function call, or '('", t.offset);
        }
    }

    Lexer lex_;
};

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace geocensus
