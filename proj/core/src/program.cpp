#include "qfl/program.hpp"

#include <sstream>

namespace qfl {

bool Statement::structurally_equal(const Statement& other) const {
    return kind == other.kind && gate_name == other.gate_name &&
           qubit_operands == other.qubit_operands && clbit_operands == other.clbit_operands &&
           params == other.params && guard == other.guard;
}

int Program::qubit_count() const {
    int n = 0;
    for (const auto& r : registers)
        if (r.quantum) n += r.size;
    return n;
}

int Program::clbit_count() const {
    int n = 0;
    for (const auto& r : registers)
        if (!r.quantum) n += r.size;
    return n;
}

const RegisterDecl* Program::find_register(const std::string& name) const {
    for (const auto& r : registers)
        if (r.name == name) return &r;
    return nullptr;
}

int Program::global_index(const Operand& op) const {
    const RegisterDecl* r = find_register(op.reg);
    return r ? r->offset + op.index : -1;
}

bool Program::structurally_equal(const Program& other) const {
    if (registers != other.registers) return false;
    if (statements.size() != other.statements.size()) return false;
    for (size_t i = 0; i < statements.size(); ++i)
        if (!statements[i].structurally_equal(other.statements[i])) return false;
    return true;
}

std::string serialize_statement(const Statement& s) {
    std::ostringstream out;
    if (s.guard)
        out << "if (" << s.guard->reg << "==" << s.guard->value << ") ";
    auto operand = [](const Operand& op) {
        return op.reg + "[" + std::to_string(op.index) + "]";
    };
    switch (s.kind) {
        case StatementKind::GateApp: {
            out << s.gate_name;
            if (!s.params.empty()) {
                out << '(';
                for (size_t i = 0; i < s.params.size(); ++i) {
                    if (i > 0) out << ',';
                    out << s.params[i].to_string();
                }
                out << ')';
            }
            out << ' ';
            for (size_t i = 0; i < s.qubit_operands.size(); ++i) {
                if (i > 0) out << ',';
                out << operand(s.qubit_operands[i]);
            }
            break;
        }
        case StatementKind::Measure:
            out << "measure " << operand(s.qubit_operands[0]) << " -> "
                << operand(s.clbit_operands[0]);
            break;
        case StatementKind::Barrier: {
            out << "barrier ";
            for (size_t i = 0; i < s.qubit_operands.size(); ++i) {
                if (i > 0) out << ',';
                out << operand(s.qubit_operands[i]);
            }
            break;
        }
        case StatementKind::Reset:
            out << "reset " << operand(s.qubit_operands[0]);
            break;
    }
    out << ';';
    return out.str();
}

std::string serialize(const Program& p) {
    std::ostringstream out;
    for (const auto& r : p.registers)
        out << (r.quantum ? "qreg " : "creg ") << r.name << '[' << r.size << "];\n";
    for (const auto& s : p.statements)
        out << serialize_statement(s) << '\n';
    return out.str();
}

} // namespace qfl
