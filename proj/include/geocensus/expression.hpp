#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "geocensus/errors.hpp"

namespace geocensus {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprOp {
    Constant,
    Var,  // the single bound variable `s`
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,  // integer exponent only
    Sin,
    Cos,
    Exp,
    Sqrt,
};

// Immutable expression tree over the variable `s`. Subtrees are shared
// (symbolic differentiation reuses operands), so nodes are handled through
// shared_ptr<const Expr> and never mutated after construction.
class Expr {
public:
    static ExprPtr constant(double v);
    static ExprPtr var();
    static ExprPtr add(ExprPtr a, ExprPtr b);
    static ExprPtr sub(ExprPtr a, ExprPtr b);
    static ExprPtr mul(ExprPtr a, ExprPtr b);
    static ExprPtr div(ExprPtr a, ExprPtr b);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr pow(ExprPtr base, int exponent);
    static ExprPtr sin(ExprPtr a);
    static ExprPtr cos(ExprPtr a);
    static ExprPtr exp(ExprPtr a);
    static ExprPtr sqrt(ExprPtr a);

    ExprOp op() const { return op_; }
    double value() const { return value_; }
    int exponent() const { return exponent_; }
    const ExprPtr& lhs() const { return lhs_; }
    const ExprPtr& rhs() const { return rhs_; }

    // Plain evaluation; domain violations propagate as NaN/Inf.
    double eval(double s) const noexcept;

    // Evaluation that throws EvalDomainError naming the offending operation.
    double eval_checked(double s) const;

    // Symbolic derivative with light constant folding.
    ExprPtr derivative() const;

    // Pretty-print with minimal parentheses; parse_expression(str()) yields a
    // structurally equal tree.
    std::string str() const;

    static bool equal(const Expr& a, const Expr& b);
    static bool equal(const ExprPtr& a, const ExprPtr& b);

private:
    Expr(ExprOp op, double value, int exponent, ExprPtr lhs, ExprPtr rhs)
        : op_(op), value_(value), exponent_(exponent),
          lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

    static ExprPtr make(ExprOp op, double value, int exponent, ExprPtr lhs, ExprPtr rhs);

    ExprOp op_;
    double value_ = 0.0;
    int exponent_ = 0;
    ExprPtr lhs_;
    ExprPtr rhs_;
};

// Parses a formula in the variable `s`. Grammar: + - * / unary minus,
// ^ with integer exponent, functions sin/cos/exp/sqrt, parentheses, real
// literals, and juxtaposition as multiplication ("2s", "2(s+1)").
// Throws ParseError (with byte offset) on malformed input or any identifier
// other than `s` and the four function names.
ExprPtr parse_expression(std::string_view text);

}  // namespace geocensus
