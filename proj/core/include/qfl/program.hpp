#pragma once

#include "qfl/param_expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qfl {

/// One register reference, e.g. q[2]. Indices are always explicit; whole-register
/// broadcast operands are not part of the language.
struct Operand {
    std::string reg;
    int index = 0;

    bool operator==(const Operand& other) const = default;
};

/// Classical condition `if (reg==value)` evaluated against the whole register.
struct Guard {
    std::string reg;
    std::uint64_t value = 0;

    bool operator==(const Guard& other) const = default;
};

enum class StatementKind { GateApp, Measure, Barrier, Reset };

struct Statement {
    int id = 0;
    int line = 0;
    StatementKind kind = StatementKind::GateApp;
    std::string gate_name;                // GateApp only
    std::vector<Operand> qubit_operands;
    std::vector<Operand> clbit_operands;  // Measure only
    std::vector<ParamExpr> params;
    std::optional<Guard> guard;

    /// Structural equality: id and line are positional/presentation data and
    /// do not participate.
    bool structurally_equal(const Statement& other) const;
};

struct RegisterDecl {
    std::string name;
    int size = 0;
    bool quantum = true;
    int offset = 0; // first global bit index

    bool operator==(const RegisterDecl& other) const = default;
};

struct Program {
    std::vector<RegisterDecl> registers; // declaration order
    std::vector<Statement> statements;   // ids are 0..N-1 in source order
    std::optional<std::string> source_path;

    int qubit_count() const;
    int clbit_count() const;

    const RegisterDecl* find_register(const std::string& name) const;

    /// Global bit index of an operand (offset of its register plus the
    /// operand index). Quantum and classical registers are numbered
    /// independently, each in declaration order.
    int global_index(const Operand& op) const;

    bool structurally_equal(const Program& other) const;
};

/// Canonical text form; parse(serialize(p)) is structurally equal to p.
std::string serialize(const Program& p);

/// Canonical text of a single statement (no trailing newline), e.g. "h q[0];".
std::string serialize_statement(const Statement& s);

} // namespace qfl
