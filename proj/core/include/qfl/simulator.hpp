#pragma once

#include "qfl/gate_catalog.hpp"
#include "qfl/program.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

namespace qfl {

struct SimOptions {
    int max_branches = 4096;
    std::chrono::milliseconds budget{10'000};
    int qubit_cap = 16;
    /// Measurement outcomes with probability mass at or below this are pruned.
    double branch_epsilon = 1e-12;
};

/// One classical-outcome branch of the statevector: the amplitudes conditioned
/// on `clbits`, carrying probability mass `weight`. Amplitudes are kept
/// normalized within the branch.
struct Branch {
    std::uint64_t clbits = 0;
    double weight = 1.0;
    std::vector<cplx> amps;
};

struct ExecutionTrace {
    std::vector<bool> covered;                  // indexed by statement id
    std::map<std::string, double> distribution; // clbit bitstring -> probability
    int branch_count = 1;                       // peak live branches
    std::chrono::nanoseconds elapsed{0};

    std::set<int> covered_ids() const;
};

/// Exact branching execution: no sampling anywhere in the verdict path.
/// Guards are evaluated per branch against that branch's classical bits; a
/// statement is covered iff it executes in at least one positive-weight
/// branch. Measurement splits a branch in two (collapse + renormalize);
/// branches with identical classical bits are summed into the final
/// distribution. Bitstring keys are MSB-first: leftmost char is the highest
/// global classical bit.
/// Throws SimError on branch explosion, budget overrun, or parameter
/// division by zero; plain Error if the program exceeds the qubit cap.
ExecutionTrace run(const Program& p, const SimOptions& opts = {});

/// Report-only multinomial draw from an exact distribution; deterministic for
/// a fixed seed. Throws EmptyInput when shots <= 0.
std::map<std::string, std::int64_t> sample(const ExecutionTrace& trace, int shots,
                                           std::uint64_t seed);

/// Applies a k-qubit gate matrix to the statevector at the given global
/// qubit targets (operand j is sub-index bit j).
void apply_gate(std::vector<cplx>& amps, const GateMatrix& u, std::span<const int> targets);

} // namespace qfl
