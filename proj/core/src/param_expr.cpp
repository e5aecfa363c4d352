#include "qfl/param_expr.hpp"

#include "qfl/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace qfl {

ParamExpr ParamExpr::literal(double v) {
    ParamExpr e;
    e.kind = Kind::Literal;
    e.value = v;
    return e;
}

ParamExpr ParamExpr::pi() {
    ParamExpr e;
    e.kind = Kind::Pi;
    return e;
}

ParamExpr ParamExpr::unary(Kind k, ParamExpr operand) {
    ParamExpr e;
    e.kind = k;
    e.children.push_back(std::move(operand));
    return e;
}

ParamExpr ParamExpr::binary(Kind k, ParamExpr lhs, ParamExpr rhs) {
    ParamExpr e;
    e.kind = k;
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
}

bool ParamExpr::operator==(const ParamExpr& other) const {
    if (kind != other.kind) return false;
    if (kind == Kind::Literal && value != other.value) return false;
    return children == other.children;
}

double ParamExpr::evaluate() const {
    switch (kind) {
        case Kind::Literal: return value;
        case Kind::Pi: return std::numbers::pi;
        case Kind::Add: return children[0].evaluate() + children[1].evaluate();
        case Kind::Sub: return children[0].evaluate() - children[1].evaluate();
        case Kind::Mul: return children[0].evaluate() * children[1].evaluate();
        case Kind::Div: {
            double denom = children[1].evaluate();
            if (denom == 0.0)
                throw SimError(SimErrorKind::DivisionByZero, "division by zero in gate parameter");
            return children[0].evaluate() / denom;
        }
        case Kind::Neg: return -children[0].evaluate();
    }
    return 0.0; // unreachable
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

// Precedence levels: 1 = additive, 2 = multiplicative, 3 = unary, 4 = primary.
int precedence(ParamExpr::Kind k) {
    switch (k) {
        case ParamExpr::Kind::Add:
        case ParamExpr::Kind::Sub: return 1;
        case ParamExpr::Kind::Mul:
        case ParamExpr::Kind::Div: return 2;
        case ParamExpr::Kind::Neg: return 3;
        default: return 4;
    }
}

void print(const ParamExpr& e, std::string& out, int min_prec) {
    const int prec = precedence(e.kind);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
        case ParamExpr::Kind::Literal:
            out += format_double(e.value);
            break;
        case ParamExpr::Kind::Pi:
            out += "pi";
            break;
        case ParamExpr::Kind::Neg:
            out += '-';
            // -a*b would reassociate, so any compound operand gets parens
            print(e.children[0], out, 4);
            break;
        default: {
            char op = e.kind == ParamExpr::Kind::Add   ? '+'
                      : e.kind == ParamExpr::Kind::Sub ? '-'
                      : e.kind == ParamExpr::Kind::Mul ? '*'
                                                       : '/';
            print(e.children[0], out, prec);
            out += op;
            // the parser is left-associative, so an equal-precedence right
            // child needs parens to keep the tree shape on reparse
            print(e.children[1], out, prec + 1);
            break;
        }
    }
    if (parens) out += ')';
}

} // namespace

std::string ParamExpr::to_string() const {
    std::string out;
    print(*this, out, 0);
    return out;
}

} // namespace qfl
