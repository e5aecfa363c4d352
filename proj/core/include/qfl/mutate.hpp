#pragma once

#include "qfl/program.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfl {

/// First-order mutation operators. QGD/QGR/QMD/QIH act on quantum structure,
/// CRP/AOR/GCR on classical expressions and guards. QIH is experimental and
/// not part of the default set.
enum class MutationOp { QGD, QGR, QMD, CRP, AOR, GCR, QIH };

std::string op_code(MutationOp op);
std::optional<MutationOp> op_from_code(std::string_view code);
bool is_quantum_op(MutationOp op);

/// "QGD,QGR,QMD,CRP,AOR,GCR"; QIH must be requested explicitly.
std::vector<MutationOp> default_operator_set();
/// Parses comma-separated operator codes; duplicates collapse, order is
/// normalized to enum order. Throws Error on an unknown code or empty list.
std::vector<MutationOp> parse_operator_set(std::string_view csv);

struct Mutant {
    std::string id;       // "<op>-<stmt id>-<variant>"; QIH uses "QIH-init-0"
    MutationOp op = MutationOp::QGD;
    int target_stmt = -1; // -1 for QIH, which has no single target
    std::string note;     // human-readable edit description
    Program program;
};

/// Generates every first-order mutant of `p` under `ops`, duplicate-free and
/// ordered by (target statement, operator code, variant). Statement ids in
/// each mutant program are renumbered to stay dense.
std::vector<Mutant> generate_mutants(const Program& p, std::span<const MutationOp> ops);
std::vector<Mutant> generate_mutants(const Program& p);

/// Indexes mutants by target statement id; QIH mutants appear under no key.
std::map<int, std::vector<std::size_t>> mut_of(std::span<const Mutant> mutants);

} // namespace qfl
