#include "qfl/parser.hpp"

#include "qfl/errors.hpp"
#include "qfl/gate_catalog.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace qfl {

namespace {

struct Token {
    enum class Kind {
        Ident, Number, LBracket, RBracket, LParen, RParen,
        Comma, Semi, Arrow, EqEq, Plus, Minus, Star, Slash, End,
    };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
    std::uint64_t int_value = 0;
    bool is_integer = false;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token tok;
        tok.line = line_;
        tok.col = col_;
        if (pos_ >= src_.size()) return tok;

        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                advance();
            tok.kind = Token::Kind::Ident;
            tok.text = std::string(src_.substr(start, pos_ - start));
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos_;
            bool is_int = true;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
            if (pos_ < src_.size() && src_[pos_] == '.') {
                is_int = false;
                advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                is_int = false;
                advance();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
            }
            std::string text(src_.substr(start, pos_ - start));
            if (text == ".")
                throw ParseError(ParseErrorKind::Syntax, tok.line, tok.col, "malformed number");
            tok.kind = Token::Kind::Number;
            tok.text = text;
            tok.is_integer = is_int;
            auto r = std::from_chars(text.data(), text.data() + text.size(), tok.number);
            if (r.ec != std::errc{})
                throw ParseError(ParseErrorKind::Syntax, tok.line, tok.col,
                                 "malformed number '" + text + "'");
            if (is_int)
                std::from_chars(text.data(), text.data() + text.size(), tok.int_value);
            return tok;
        }
        switch (c) {
            case '[': tok.kind = Token::Kind::LBracket; break;
            case ']': tok.kind = Token::Kind::RBracket; break;
            case '(': tok.kind = Token::Kind::LParen; break;
            case ')': tok.kind = Token::Kind::RParen; break;
            case ',': tok.kind = Token::Kind::Comma; break;
            case ';': tok.kind = Token::Kind::Semi; break;
            case '+': tok.kind = Token::Kind::Plus; break;
            case '*': tok.kind = Token::Kind::Star; break;
            case '/': tok.kind = Token::Kind::Slash; break;
            case '-':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                    advance();
                    tok.kind = Token::Kind::Arrow;
                } else {
                    tok.kind = Token::Kind::Minus;
                }
                break;
            case '=':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                    advance();
                    tok.kind = Token::Kind::EqEq;
                } else {
                    throw ParseError(ParseErrorKind::Syntax, line_, col_, "expected '=='");
                }
                break;
            default:
                throw ParseError(ParseErrorKind::Syntax, line_, col_,
                                 std::string("unexpected character '") + c + "'");
        }
        advance();
        return tok;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::set<std::string, std::less<>> kReservedWords = {
    "qreg", "creg", "measure", "barrier", "reset", "if", "pi",
};

// Constructs that exist in full OpenQASM 2 but are deliberately outside this
// subset; they get a dedicated error so the message can say so.
const std::set<std::string, std::less<>> kUnsupportedWords = {
    "OPENQASM", "include", "gate", "opaque", "U", "CX",
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { shift(); }

    Program parse_program() {
        Program p;
        while (cur_.kind == Token::Kind::Ident && (cur_.text == "qreg" || cur_.text == "creg"))
            parse_decl(p);
        while (cur_.kind != Token::Kind::End) parse_statement(p);
        return p;
    }

private:
    [[noreturn]] void fail(ParseErrorKind kind, const std::string& message) const {
        throw ParseError(kind, cur_.line, cur_.col, message);
    }

    void shift() { cur_ = lexer_.next(); }

    void expect(Token::Kind kind, const char* what) {
        if (cur_.kind != kind) fail(ParseErrorKind::Syntax, std::string("expected ") + what);
        shift();
    }

    std::string expect_ident(const char* what) {
        if (cur_.kind != Token::Kind::Ident)
            fail(ParseErrorKind::Syntax, std::string("expected ") + what);
        std::string name = cur_.text;
        shift();
        return name;
    }

    std::uint64_t expect_integer(const char* what) {
        if (cur_.kind != Token::Kind::Number || !cur_.is_integer)
            fail(ParseErrorKind::Syntax, std::string("expected ") + what);
        std::uint64_t v = cur_.int_value;
        shift();
        return v;
    }

    void parse_decl(Program& p) {
        bool quantum = cur_.text == "qreg";
        shift();
        std::string name = expect_ident("register name");
        if (kReservedWords.count(name))
            fail(ParseErrorKind::Syntax, "'" + name + "' is a reserved word");
        if (p.find_register(name))
            fail(ParseErrorKind::Syntax, "register '" + name + "' already declared");
        expect(Token::Kind::LBracket, "'['");
        std::uint64_t size = expect_integer("register size");
        if (size == 0 || size > 64)
            fail(ParseErrorKind::Syntax, "register size must be in 1..64");
        expect(Token::Kind::RBracket, "']'");
        expect(Token::Kind::Semi, "';'");

        RegisterDecl decl;
        decl.name = std::move(name);
        decl.size = static_cast<int>(size);
        decl.quantum = quantum;
        decl.offset = quantum ? p.qubit_count() : p.clbit_count();
        p.registers.push_back(std::move(decl));
    }

    Operand parse_operand(const Program& p, bool quantum, const char* what) {
        int line = cur_.line, col = cur_.col;
        std::string name = expect_ident(what);
        const RegisterDecl* reg = p.find_register(name);
        if (!reg)
            throw ParseError(ParseErrorKind::Syntax, line, col,
                             "unknown register '" + name + "'");
        if (reg->quantum != quantum)
            throw ParseError(ParseErrorKind::Syntax, line, col,
                             std::string("operand must be a ") +
                                 (quantum ? "quantum" : "classical") + " register");
        if (cur_.kind != Token::Kind::LBracket)
            fail(ParseErrorKind::UnsupportedConstruct,
                 "whole-register operands are not supported; index as " + name + "[i]");
        shift();
        std::uint64_t index = expect_integer("operand index");
        if (index >= static_cast<std::uint64_t>(reg->size))
            throw ParseError(ParseErrorKind::OperandOutOfRange, line, col,
                             name + "[" + std::to_string(index) + "] exceeds size " +
                                 std::to_string(reg->size));
        expect(Token::Kind::RBracket, "']'");
        return Operand{std::move(name), static_cast<int>(index)};
    }

    ParamExpr parse_expr() {
        ParamExpr lhs = parse_term();
        while (cur_.kind == Token::Kind::Plus || cur_.kind == Token::Kind::Minus) {
            auto k = cur_.kind == Token::Kind::Plus ? ParamExpr::Kind::Add : ParamExpr::Kind::Sub;
            shift();
            lhs = ParamExpr::binary(k, std::move(lhs), parse_term());
        }
        return lhs;
    }

    ParamExpr parse_term() {
        ParamExpr lhs = parse_unary();
        while (cur_.kind == Token::Kind::Star || cur_.kind == Token::Kind::Slash) {
            auto k = cur_.kind == Token::Kind::Star ? ParamExpr::Kind::Mul : ParamExpr::Kind::Div;
            shift();
            lhs = ParamExpr::binary(k, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ParamExpr parse_unary() {
        if (cur_.kind == Token::Kind::Minus) {
            shift();
            return ParamExpr::unary(ParamExpr::Kind::Neg, parse_unary());
        }
        return parse_primary();
    }

    ParamExpr parse_primary() {
        if (cur_.kind == Token::Kind::Number) {
            double v = cur_.number;
            shift();
            return ParamExpr::literal(v);
        }
        if (cur_.kind == Token::Kind::Ident && cur_.text == "pi") {
            shift();
            return ParamExpr::pi();
        }
        if (cur_.kind == Token::Kind::LParen) {
            shift();
            ParamExpr e = parse_expr();
            expect(Token::Kind::RParen, "')'");
            return e;
        }
        fail(ParseErrorKind::Syntax, "expected parameter expression");
    }

    std::optional<Guard> parse_guard(const Program& p) {
        if (cur_.kind != Token::Kind::Ident || cur_.text != "if") return std::nullopt;
        shift();
        expect(Token::Kind::LParen, "'('");
        int line = cur_.line, col = cur_.col;
        std::string name = expect_ident("classical register name");
        const RegisterDecl* reg = p.find_register(name);
        if (!reg || reg->quantum)
            throw ParseError(ParseErrorKind::Syntax, line, col,
                             "guard must test a classical register");
        expect(Token::Kind::EqEq, "'=='");
        std::uint64_t value = expect_integer("guard constant");
        if (reg->size < 64 && value >= (std::uint64_t{1} << reg->size))
            throw ParseError(ParseErrorKind::OperandOutOfRange, line, col,
                             "guard constant does not fit register '" + name + "'");
        expect(Token::Kind::RParen, "')'");
        return Guard{std::move(name), value};
    }

    void check_distinct_qubits(const Program& p, const Statement& s, int line, int col) {
        std::set<int> seen;
        for (const auto& op : s.qubit_operands)
            if (!seen.insert(p.global_index(op)).second)
                throw ParseError(ParseErrorKind::DuplicateQubitOperand, line, col,
                                 "duplicate qubit operand " + op.reg + "[" +
                                     std::to_string(op.index) + "]");
    }

    void parse_statement(Program& p) {
        int line = cur_.line, col = cur_.col;
        Statement s;
        s.line = line;
        s.guard = parse_guard(p);
        if (s.guard) {
            line = cur_.line;
            col = cur_.col;
        }

        if (cur_.kind != Token::Kind::Ident)
            fail(ParseErrorKind::Syntax, "expected statement");
        std::string head = cur_.text;

        if (head == "qreg" || head == "creg")
            fail(ParseErrorKind::Syntax, "register declarations must precede statements");
        if (kUnsupportedWords.count(head))
            fail(ParseErrorKind::UnsupportedConstruct,
                 "'" + head + "' is outside the supported language subset");

        if (head == "measure") {
            shift();
            s.kind = StatementKind::Measure;
            s.qubit_operands.push_back(parse_operand(p, true, "qubit operand"));
            expect(Token::Kind::Arrow, "'->'");
            s.clbit_operands.push_back(parse_operand(p, false, "classical operand"));
        } else if (head == "barrier") {
            shift();
            s.kind = StatementKind::Barrier;
            s.qubit_operands.push_back(parse_operand(p, true, "qubit operand"));
            while (cur_.kind == Token::Kind::Comma) {
                shift();
                s.qubit_operands.push_back(parse_operand(p, true, "qubit operand"));
            }
        } else if (head == "reset") {
            shift();
            s.kind = StatementKind::Reset;
            s.qubit_operands.push_back(parse_operand(p, true, "qubit operand"));
        } else {
            const GateInfo* gate = GateCatalog::instance().find(head);
            if (!gate)
                fail(ParseErrorKind::UnknownGate, "unknown gate '" + head + "'");
            shift();
            s.kind = StatementKind::GateApp;
            s.gate_name = head;
            if (cur_.kind == Token::Kind::LParen) {
                shift();
                s.params.push_back(parse_expr());
                while (cur_.kind == Token::Kind::Comma) {
                    shift();
                    s.params.push_back(parse_expr());
                }
                expect(Token::Kind::RParen, "')'");
            }
            if (static_cast<int>(s.params.size()) != gate->param_count)
                throw ParseError(ParseErrorKind::Syntax, line, col,
                                 "gate '" + head + "' takes " +
                                     std::to_string(gate->param_count) + " parameter(s), got " +
                                     std::to_string(s.params.size()));
            s.qubit_operands.push_back(parse_operand(p, true, "qubit operand"));
            while (cur_.kind == Token::Kind::Comma) {
                shift();
                s.qubit_operands.push_back(parse_operand(p, true, "qubit operand"));
            }
            if (static_cast<int>(s.qubit_operands.size()) != gate->arity)
                throw ParseError(ParseErrorKind::Syntax, line, col,
                                 "gate '" + head + "' takes " + std::to_string(gate->arity) +
                                     " qubit(s), got " + std::to_string(s.qubit_operands.size()));
        }
        expect(Token::Kind::Semi, "';'");
        check_distinct_qubits(p, s, line, col);

        s.id = static_cast<int>(p.statements.size());
        p.statements.push_back(std::move(s));
    }

    Lexer lexer_;
    Token cur_;
};

} // namespace

Program parse(std::string_view source, std::optional<std::string> source_path) {
    Parser parser(source);
    Program p = parser.parse_program();
    p.source_path = std::move(source_path);
    return p;
}

Program parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str(), path);
    } catch (const ParseError& e) {
        throw ParseError(e.kind(), e.line(), e.column(), e.detail(), path);
    }
}

} // namespace qfl
