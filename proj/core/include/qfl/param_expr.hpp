#pragma once

#include <string>
#include <vector>

namespace qfl {

/// Arithmetic expression attached to a gate parameter: literals, the
/// constant pi, binary + - * /, and unary negation. Value-semantic tree;
/// children.size() is 0 for Literal/Pi, 1 for Neg, 2 for the binary nodes.
struct ParamExpr {
    enum class Kind { Literal, Pi, Add, Sub, Mul, Div, Neg };

    Kind kind = Kind::Literal;
    double value = 0.0; // Literal only
    std::vector<ParamExpr> children;

    static ParamExpr literal(double v);
    static ParamExpr pi();
    static ParamExpr unary(Kind k, ParamExpr operand);
    static ParamExpr binary(Kind k, ParamExpr lhs, ParamExpr rhs);

    bool operator==(const ParamExpr& other) const;

    /// Evaluates the expression; throws SimError(DivisionByZero) on x/0.
    double evaluate() const;

    /// Canonical text with minimal parentheses; parsing it back yields a
    /// structurally equal tree.
    std::string to_string() const;
};

/// Shortest decimal form of a double that round-trips exactly.
std::string format_double(double v);

} // namespace qfl
