#include "qfl/mutate.hpp"

#include "qfl/errors.hpp"
#include "qfl/gate_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qfl {

namespace {

constexpr MutationOp kAllOps[] = {MutationOp::QGD, MutationOp::QGR, MutationOp::QMD,
                                  MutationOp::CRP, MutationOp::AOR, MutationOp::GCR,
                                  MutationOp::QIH};

Program without_statement(const Program& p, std::size_t index) {
    Program out = p;
    out.statements.erase(out.statements.begin() + static_cast<std::ptrdiff_t>(index));
    return out;
}

void renumber(Program& p) {
    for (std::size_t i = 0; i < p.statements.size(); ++i)
        p.statements[i].id = static_cast<int>(i);
}

/// Pre-order paths (child index chains) of nodes matching `keep`.
void collect_paths(const ParamExpr& e, std::vector<int>& path,
                   const std::function<bool(const ParamExpr&)>& keep,
                   std::vector<std::vector<int>>& out) {
    if (keep(e))
        out.push_back(path);
    for (std::size_t c = 0; c < e.children.size(); ++c) {
        path.push_back(static_cast<int>(c));
        collect_paths(e.children[c], path, keep, out);
        path.pop_back();
    }
}

ParamExpr& node_at(ParamExpr& root, std::span<const int> path) {
    ParamExpr* cur = &root;
    for (int c : path)
        cur = &cur->children[static_cast<std::size_t>(c)];
    return *cur;
}

char op_symbol(ParamExpr::Kind k) {
    switch (k) {
    case ParamExpr::Kind::Add: return '+';
    case ParamExpr::Kind::Sub: return '-';
    case ParamExpr::Kind::Mul: return '*';
    case ParamExpr::Kind::Div: return '/';
    default: return '?';
    }
}

struct Emitter {
    std::vector<Mutant>& out;
    const Program& original;

    void emit(MutationOp op, int target, int variant, std::string note, Program program) {
        renumber(program);
        Mutant m;
        m.op = op;
        m.target_stmt = target;
        m.note = std::move(note);
        m.program = std::move(program);
        m.id = op_code(op) + "-" +
               (target < 0 ? std::string("init") : std::to_string(target)) + "-" +
               std::to_string(variant);
        out.push_back(std::move(m));
    }
};

void gen_qgd(Emitter& em, const Program& p, std::size_t i) {
    const Statement& s = p.statements[i];
    if (s.kind != StatementKind::GateApp)
        return;
    em.emit(MutationOp::QGD, s.id, 0, "delete " + serialize_statement(s), without_statement(p, i));
}

void gen_qmd(Emitter& em, const Program& p, std::size_t i) {
    const Statement& s = p.statements[i];
    if (s.kind != StatementKind::Measure)
        return;
    em.emit(MutationOp::QMD, s.id, 0, "delete " + serialize_statement(s), without_statement(p, i));
}

void gen_qgr(Emitter& em, const Program& p, std::size_t i) {
    const Statement& s = p.statements[i];
    if (s.kind != StatementKind::GateApp)
        return;
    int variant = 0;
    for (const std::string& alt : GateCatalog::instance().replacement_family(s.gate_name)) {
        Program q = p;
        q.statements[i].gate_name = alt;
        em.emit(MutationOp::QGR, s.id, variant++, "replace " + s.gate_name + " with " + alt,
                std::move(q));
    }
}

void gen_crp(Emitter& em, const Program& p, std::size_t i) {
    const Statement& s = p.statements[i];
    if (s.kind != StatementKind::GateApp || s.params.empty())
        return;
    int variant = 0;
    for (std::size_t pi = 0; pi < s.params.size(); ++pi) {
        std::vector<std::vector<int>> paths;
        std::vector<int> scratch;
        collect_paths(s.params[pi], scratch,
                      [](const ParamExpr& e) { return e.kind == ParamExpr::Kind::Literal; },
                      paths);
        for (const auto& path : paths) {
            const ParamExpr* lit = &s.params[pi];
            for (int ci : path)
                lit = &lit->children[static_cast<std::size_t>(ci)];
            const double c = lit->value;
            // Replacement pool {0, 1, -c, c+1} minus anything numerically
            // equal to c or to an earlier pool member.
            struct Candidate {
                double value;
                ParamExpr expr;
            };
            const Candidate pool[] = {
                {0.0, ParamExpr::literal(0.0)},
                {1.0, ParamExpr::literal(1.0)},
                {-c, ParamExpr::unary(ParamExpr::Kind::Neg, ParamExpr::literal(c))},
                {c + 1.0, ParamExpr::literal(c + 1.0)},
            };
            std::vector<double> used{c};
            for (const Candidate& cand : pool) {
                if (std::any_of(used.begin(), used.end(),
                                [&](double v) { return v == cand.value; }))
                    continue;
                used.push_back(cand.value);
                Program q = p;
                node_at(q.statements[i].params[pi], path) = cand.expr;
                em.emit(MutationOp::CRP, s.id, variant++,
                        "replace literal " + format_double(c) + " with " +
                            format_double(cand.value) + " in param " + std::to_string(pi),
                        std::move(q));
            }
        }
    }
}

void gen_aor(Emitter& em, const Program& p, std::size_t i) {
    const Statement& s = p.statements[i];
    if (s.kind != StatementKind::GateApp || s.params.empty())
        return;
    auto swapped = [](ParamExpr::Kind k) {
        switch (k) {
        case ParamExpr::Kind::Add: return ParamExpr::Kind::Sub;
        case ParamExpr::Kind::Sub: return ParamExpr::Kind::Add;
        case ParamExpr::Kind::Mul: return ParamExpr::Kind::Div;
        case ParamExpr::Kind::Div: return ParamExpr::Kind::Mul;
        default: return k;
        }
    };
    int variant = 0;
    for (std::size_t pi = 0; pi < s.params.size(); ++pi) {
        std::vector<std::vector<int>> paths;
        std::vector<int> scratch;
        collect_paths(s.params[pi], scratch,
                      [&](const ParamExpr& e) { return swapped(e.kind) != e.kind; }, paths);
        for (const auto& path : paths) {
            Program q = p;
            ParamExpr& node = node_at(q.statements[i].params[pi], path);
            const char before = op_symbol(node.kind);
            node.kind = swapped(node.kind);
            em.emit(MutationOp::AOR, s.id, variant++,
                    std::string("replace operator ") + before + " with " + op_symbol(node.kind) +
                        " in param " + std::to_string(pi),
                    std::move(q));
        }
    }
}

void gen_gcr(Emitter& em, const Program& p, std::size_t i) {
    const Statement& s = p.statements[i];
    if (!s.guard)
        return;
    const RegisterDecl* reg = p.find_register(s.guard->reg);
    const std::uint64_t top =
        reg->size >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << reg->size) - 1;
    int variant = 0;
    for (std::uint64_t k = 0;; ++k) {
        if (k != s.guard->value) {
            Program q = p;
            q.statements[i].guard->value = k;
            em.emit(MutationOp::GCR, s.id, variant++,
                    "replace guard constant " + std::to_string(s.guard->value) + " with " +
                        std::to_string(k),
                    std::move(q));
        }
        if (k == top)
            break;
    }
}

void gen_qih(Emitter& em, const Program& p) {
    if (p.qubit_count() == 0)
        return;
    Program q = p;
    std::vector<Statement> layer;
    for (const RegisterDecl& reg : p.registers) {
        if (!reg.quantum)
            continue;
        for (int j = 0; j < reg.size; ++j) {
            Statement h;
            h.kind = StatementKind::GateApp;
            h.gate_name = "h";
            h.qubit_operands.push_back({reg.name, j});
            layer.push_back(std::move(h));
        }
    }
    q.statements.insert(q.statements.begin(), layer.begin(), layer.end());
    em.emit(MutationOp::QIH, -1, 0, "prepend h layer on all qubits", std::move(q));
}

} // namespace

std::string op_code(MutationOp op) {
    switch (op) {
    case MutationOp::QGD: return "QGD";
    case MutationOp::QGR: return "QGR";
    case MutationOp::QMD: return "QMD";
    case MutationOp::CRP: return "CRP";
    case MutationOp::AOR: return "AOR";
    case MutationOp::GCR: return "GCR";
    case MutationOp::QIH: return "QIH";
    }
    return "???";
}

std::optional<MutationOp> op_from_code(std::string_view code) {
    for (MutationOp op : kAllOps) {
        if (op_code(op) == code)
            return op;
    }
    return std::nullopt;
}

bool is_quantum_op(MutationOp op) {
    switch (op) {
    case MutationOp::QGD:
    case MutationOp::QGR:
    case MutationOp::QMD:
    case MutationOp::QIH:
        return true;
    case MutationOp::CRP:
    case MutationOp::AOR:
    case MutationOp::GCR:
        return false;
    }
    return false;
}

std::vector<MutationOp> default_operator_set() {
    return {MutationOp::QGD, MutationOp::QGR, MutationOp::QMD,
            MutationOp::CRP, MutationOp::AOR, MutationOp::GCR};
}

std::vector<MutationOp> parse_operator_set(std::string_view csv) {
    std::vector<MutationOp> set;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string_view::npos)
            comma = csv.size();
        std::string_view token = csv.substr(pos, comma - pos);
        while (!token.empty() && token.front() == ' ')
            token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ')
            token.remove_suffix(1);
        if (!token.empty()) {
            auto op = op_from_code(token);
            if (!op)
                throw Error("unknown mutation operator code '" + std::string(token) + "'");
            if (std::find(set.begin(), set.end(), *op) == set.end())
                set.push_back(*op);
        }
        pos = comma + 1;
    }
    if (set.empty())
        throw Error("mutation operator set is empty");
    std::sort(set.begin(), set.end());
    return set;
}

std::vector<Mutant> generate_mutants(const Program& p, std::span<const MutationOp> ops) {
    if (ops.empty())
        throw Error("mutation operator set is empty");
    std::vector<Mutant> mutants;
    Emitter em{mutants, p};

    auto enabled = [&](MutationOp op) {
        return std::find(ops.begin(), ops.end(), op) != ops.end();
    };

    if (enabled(MutationOp::QIH))
        gen_qih(em, p);
    for (std::size_t i = 0; i < p.statements.size(); ++i) {
        if (enabled(MutationOp::QGD))
            gen_qgd(em, p, i);
        if (enabled(MutationOp::QGR))
            gen_qgr(em, p, i);
        if (enabled(MutationOp::QMD))
            gen_qmd(em, p, i);
        if (enabled(MutationOp::CRP))
            gen_crp(em, p, i);
        if (enabled(MutationOp::AOR))
            gen_aor(em, p, i);
        if (enabled(MutationOp::GCR))
            gen_gcr(em, p, i);
    }

    // Ties keep emission order, which is ascending variant within (stmt, op).
    std::stable_sort(mutants.begin(), mutants.end(), [](const Mutant& a, const Mutant& b) {
        if (a.target_stmt != b.target_stmt)
            return a.target_stmt < b.target_stmt;
        return op_code(a.op) < op_code(b.op);
    });
    return mutants;
}

std::vector<Mutant> generate_mutants(const Program& p) {
    const auto ops = default_operator_set();
    return generate_mutants(p, ops);
}

std::map<int, std::vector<std::size_t>> mut_of(std::span<const Mutant> mutants) {
    std::map<int, std::vector<std::size_t>> index;
    for (std::size_t m = 0; m < mutants.size(); ++m) {
        if (mutants[m].target_stmt >= 0)
            index[mutants[m].target_stmt].push_back(m);
    }
    return index;
}

} // namespace qfl
