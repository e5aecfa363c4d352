#pragma once

#include "qfl/mutate.hpp"
#include "qfl/program.hpp"
#include "qfl/runner.hpp"

#include <set>
#include <span>
#include <string>
#include <vector>

namespace qfl {

/// Coverage spectrum of one statement over the original program's row.
/// Tests whose original verdict is Timeout contribute nowhere; CrashError
/// counts as failed with empty coverage.
struct Spectrum {
    int ef = 0; // failed tests covering the statement
    int ep = 0; // passed tests covering it
    int nf = 0; // failed tests not covering it
    int np = 0; // passed tests not covering it
};

struct RankEntry {
    int id = 0;
    double score = 0.0;
    int best_rank = 0;  // 1 + number of strictly better scores
    int worst_rank = 0; // best_rank + tie group size - 1
};

struct SuspiciousnessReport {
    std::string method; // "muse", "ochiai", or "tarantula"
    std::vector<RankEntry> ranked; // score descending, id ascending within ties
    bool degenerate = false;
    bool has_exam = false; // set when a ground truth was supplied
    double exam_best = 0.0;
    double exam_worst = 0.0;
};

std::vector<Spectrum> compute_spectra(const Program& p, const ExecutionMatrix& m);

/// Mutation-based suspiciousness, one score per statement:
///   S(s) = (1/|mut(s)|) * sum over m in mut(s) of |f_P(s) ∩ p_m| / |f_P(s)|
/// where f_P(s) is the failing tests covering s on the original row and p_m
/// the tests the mutant passes. Mutants with any Timeout cell are dropped
/// from mut(s); S(s) = 0 when f_P(s) or mut(s) is empty. Throws
/// NoFailingTests when the original row has no failing test.
std::vector<double> muse_scores(const Program& p, const ExecutionMatrix& m,
                                std::span<const Mutant> mutants);

/// ef / sqrt((ef+nf)(ef+ep)); 0/0 is 0.
std::vector<double> ochiai_scores(std::span<const Spectrum> spectra);
/// (ef/(ef+nf)) / (ef/(ef+nf) + ep/(ep+np)); inner and outer 0/0 are 0.
std::vector<double> tarantula_scores(std::span<const Spectrum> spectra);

/// SBFL is statistically meaningless with a single test, no passing test,
/// or no failing test; scores are still computed, this only flags it.
bool sbfl_degenerate(const ExecutionMatrix& m);

/// Per-statement tie-aware ranks for a full score vector.
std::vector<RankEntry> rank_statements(std::span<const double> scores);

/// Ranks plus EXAM = 100 * rank / N for the best-ranked faulty statement,
/// best and worst scenarios taken independently. Throws EmptyFaultSet.
SuspiciousnessReport rank_and_exam(std::span<const double> scores, const Program& p,
                                   const std::set<int>& faulty, const std::string& method);

/// Ranking report without ground truth (no exam fields).
SuspiciousnessReport rank_report(std::span<const double> scores, const std::string& method);

/// Report JSON: method, degenerate flag, ranked statements with scores and
/// ranks (statement text included), exam fields when present, and mutant
/// behavior-changing flags when a matrix is supplied (MBFL reports).
std::string report_json(const SuspiciousnessReport& report, const Program& p,
                        const ExecutionMatrix* matrix);

/// Fixed-width table for terminals; one row per statement in rank order.
std::string report_table(const SuspiciousnessReport& report, const Program& p);

} // namespace qfl
