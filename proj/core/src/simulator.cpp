#include "qfl/simulator.hpp"

#include "qfl/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace qfl {

namespace {

using Clock = std::chrono::steady_clock;

std::string format_clbits(std::uint64_t clbits, int clbit_count) {
    std::string key(static_cast<std::size_t>(clbit_count), '0');
    for (int k = 0; k < clbit_count; ++k) {
        if ((clbits >> k) & 1u)
            key[static_cast<std::size_t>(clbit_count - 1 - k)] = '1';
    }
    return key;
}

double prob_of_bit(const std::vector<cplx>& amps, int qubit, int outcome) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (((i & bit) != 0) == (outcome == 1))
            p += std::norm(amps[i]);
    }
    return p;
}

/// Projects onto `outcome` of `qubit` and renormalizes; `p` is the outcome
/// probability already computed for this branch.
void collapse(std::vector<cplx>& amps, int qubit, int outcome, double p) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const double scale = 1.0 / std::sqrt(p);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (((i & bit) != 0) == (outcome == 1))
            amps[i] *= scale;
        else
            amps[i] = cplx{0.0, 0.0};
    }
}

void apply_x(std::vector<cplx>& amps, int qubit) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) == 0)
            std::swap(amps[i], amps[i | bit]);
    }
}

std::uint64_t register_mask(int size) {
    return size >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
}

} // namespace

std::set<int> ExecutionTrace::covered_ids() const {
    std::set<int> ids;
    for (std::size_t s = 0; s < covered.size(); ++s) {
        if (covered[s])
            ids.insert(static_cast<int>(s));
    }
    return ids;
}

void apply_gate(std::vector<cplx>& amps, const GateMatrix& u, std::span<const int> targets) {
    const int k = static_cast<int>(targets.size());
    const int dim = 1 << k;
    std::uint64_t target_mask = 0;
    std::array<std::uint64_t, 8> offset{};
    for (int sub = 0; sub < dim; ++sub) {
        std::uint64_t off = 0;
        for (int j = 0; j < k; ++j) {
            if ((sub >> j) & 1)
                off |= std::uint64_t{1} << targets[static_cast<std::size_t>(j)];
        }
        offset[static_cast<std::size_t>(sub)] = off;
    }
    target_mask = offset[static_cast<std::size_t>(dim - 1)];

    std::array<cplx, 8> in{};
    for (std::uint64_t base = 0; base < amps.size(); ++base) {
        if (base & target_mask)
            continue;
        for (int sub = 0; sub < dim; ++sub)
            in[static_cast<std::size_t>(sub)] = amps[base | offset[static_cast<std::size_t>(sub)]];
        for (int row = 0; row < dim; ++row) {
            cplx acc{0.0, 0.0};
            for (int col = 0; col < dim; ++col)
                acc += u.at(row, col) * in[static_cast<std::size_t>(col)];
            amps[base | offset[static_cast<std::size_t>(row)]] = acc;
        }
    }
}

ExecutionTrace run(const Program& p, const SimOptions& opts) {
    const int nq = p.qubit_count();
    const int nc = p.clbit_count();
    if (nq > opts.qubit_cap) {
        throw Error("program uses " + std::to_string(nq) + " qubits, cap is " +
                    std::to_string(opts.qubit_cap));
    }
    if (nc > 64)
        throw Error("program uses more than 64 classical bits");

    const auto start = Clock::now();
    auto over_budget = [&] { return Clock::now() - start > opts.budget; };

    ExecutionTrace trace;
    trace.covered.assign(p.statements.size(), false);

    std::vector<Branch> branches(1);
    branches[0].amps.assign(std::uint64_t{1} << nq, cplx{0.0, 0.0});
    branches[0].amps[0] = cplx{1.0, 0.0};
    trace.branch_count = 1;

    const GateCatalog& catalog = GateCatalog::instance();

    for (const Statement& stmt : p.statements) {
        if (over_budget())
            throw SimError(SimErrorKind::BudgetExceeded, "execution budget exceeded at statement " +
                                                             std::to_string(stmt.id));

        // Guard evaluation partitions the branches; only matching ones execute.
        std::vector<bool> executes(branches.size(), true);
        if (stmt.guard) {
            const RegisterDecl* reg = p.find_register(stmt.guard->reg);
            const std::uint64_t mask = register_mask(reg->size);
            for (std::size_t b = 0; b < branches.size(); ++b)
                executes[b] = ((branches[b].clbits >> reg->offset) & mask) == stmt.guard->value;
        }
        bool any = std::find(executes.begin(), executes.end(), true) != executes.end();
        if (!any)
            continue;
        trace.covered[static_cast<std::size_t>(stmt.id)] = true;

        switch (stmt.kind) {
        case StatementKind::Barrier:
            break;
        case StatementKind::GateApp: {
            const GateInfo* info = catalog.find(stmt.gate_name);
            if (info == nullptr)
                throw Error("unknown gate '" + stmt.gate_name + "' in statement " +
                            std::to_string(stmt.id));
            if (static_cast<int>(stmt.qubit_operands.size()) != info->arity ||
                static_cast<int>(stmt.params.size()) != info->param_count)
                throw Error("malformed gate application in statement " + std::to_string(stmt.id));
            std::vector<double> args;
            args.reserve(stmt.params.size());
            for (const ParamExpr& e : stmt.params)
                args.push_back(e.evaluate());
            const GateMatrix u = info->build(args);
            std::vector<int> targets;
            targets.reserve(stmt.qubit_operands.size());
            for (const Operand& op : stmt.qubit_operands)
                targets.push_back(p.global_index(op));
            for (std::size_t b = 0; b < branches.size(); ++b) {
                if (executes[b])
                    apply_gate(branches[b].amps, u, targets);
            }
            break;
        }
        case StatementKind::Measure:
        case StatementKind::Reset: {
            const int qubit = p.global_index(stmt.qubit_operands[0]);
            int clbit = -1;
            if (stmt.kind == StatementKind::Measure)
                clbit = p.global_index(stmt.clbit_operands[0]);
            std::vector<Branch> next;
            next.reserve(branches.size() + 1);
            for (std::size_t b = 0; b < branches.size(); ++b) {
                if (!executes[b]) {
                    next.push_back(std::move(branches[b]));
                    continue;
                }
                Branch& br = branches[b];
                const double p0 = prob_of_bit(br.amps, qubit, 0);
                const double p1 = prob_of_bit(br.amps, qubit, 1);
                for (int outcome = 0; outcome < 2; ++outcome) {
                    const double mass = outcome == 0 ? p0 : p1;
                    if (mass <= opts.branch_epsilon)
                        continue;
                    Branch child;
                    child.weight = br.weight * mass;
                    child.clbits = br.clbits;
                    child.amps = br.amps;
                    collapse(child.amps, qubit, outcome, mass);
                    if (stmt.kind == StatementKind::Measure) {
                        const std::uint64_t bit = std::uint64_t{1} << clbit;
                        child.clbits = outcome == 1 ? (child.clbits | bit) : (child.clbits & ~bit);
                    } else if (outcome == 1) {
                        apply_x(child.amps, qubit); // reset: flip the 1 outcome back to 0
                    }
                    next.push_back(std::move(child));
                }
            }
            branches = std::move(next);
            if (static_cast<int>(branches.size()) > opts.max_branches) {
                throw SimError(SimErrorKind::BranchExplosion,
                               "branch count " + std::to_string(branches.size()) +
                                   " exceeds limit " + std::to_string(opts.max_branches));
            }
            trace.branch_count = std::max(trace.branch_count, static_cast<int>(branches.size()));
            break;
        }
        }
    }

    // Branches are distinguishable only by their classical bits; merge now.
    std::map<std::uint64_t, double> merged;
    for (const Branch& br : branches)
        merged[br.clbits] += br.weight;
    for (const auto& [clbits, weight] : merged)
        trace.distribution[format_clbits(clbits, nc)] += weight;

    trace.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return trace;
}

std::map<std::string, std::int64_t> sample(const ExecutionTrace& trace, int shots,
                                           std::uint64_t seed) {
    if (shots <= 0)
        throw EmptyInput("shots must be positive");

    std::vector<std::pair<std::string, double>> cumulative;
    cumulative.reserve(trace.distribution.size());
    double acc = 0.0;
    for (const auto& [key, prob] : trace.distribution) {
        acc += prob;
        cumulative.emplace_back(key, acc);
    }

    std::map<std::string, std::int64_t> counts;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < shots; ++s) {
        // 53-bit mantissa draw in [0, 1); platform-independent unlike
        // std::uniform_real_distribution.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u,
                                   [](const auto& entry, double v) { return entry.second <= v; });
        if (it == cumulative.end())
            it = std::prev(cumulative.end());
        ++counts[it->first];
    }
    return counts;
}

} // namespace qfl
