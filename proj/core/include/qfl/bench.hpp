#pragma once

#include "qfl/localize.hpp"
#include "qfl/mutate.hpp"
#include "qfl/program.hpp"
#include "qfl/runner.hpp"
#include "qfl/simulator.hpp"

#include <chrono>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace qfl {

/// One localization task: a buggy program, the reference fix, the suite the
/// reference passes and the buggy program fails, and the buggy statement ids.
struct BenchmarkItem {
    std::string id;
    Program buggy;
    Program reference;
    std::vector<TestCase> tests;
    std::set<int> ground_truth;
    std::string origin; // "injected:<OP>" or "curated"
};

struct InjectOptions {
    std::vector<MutationOp> ops = default_operator_set();
    SimOptions sim;
    std::string name_prefix = "item";
};

/// Mutates `reference` and keeps each mutant that fails at least one test
/// within budget (no Timeout cells) as a benchmark item whose buggy program
/// is the mutant. Ground truth comes from the edit-script diff against the
/// reference. Throws ReferenceFailsSuite when the reference does not pass
/// the whole suite.
std::vector<BenchmarkItem> inject_faults(const Program& reference,
                                         std::span<const TestCase> suite,
                                         const InjectOptions& opts);

struct EvalOptions {
    std::vector<std::string> methods = {"muse", "ochiai", "tarantula"};
    std::vector<MutationOp> ops = default_operator_set();
    SimOptions sim;
    int workers = 1;
};

struct EvalRecord {
    std::string item_id;
    std::string origin;
    std::string method;
    double exam_best = 0.0;
    double exam_worst = 0.0;
    bool degenerate = false;
    int mutants_generated = 0;
    int bc_total = 0;
    int bc_quantum = 0;
    int bc_classical = 0;
    std::map<std::string, int> generated_by_op; // operator code -> count
    std::map<std::string, int> bc_by_op;
    std::chrono::nanoseconds wall{0}; // diagnostic only, never serialized
};

struct ItemFailure {
    std::string item_id;
    std::string error;
};

struct EvalResult {
    std::vector<EvalRecord> records;   // item order, then method order
    std::vector<ItemFailure> failures; // items skipped with their diagnostics
};

/// Evaluates every item independently: mutate the buggy program, run the
/// matrix, score with each method, compute EXAM against the ground truth.
/// Item failures (reference failing its suite, no failing test, ...) are
/// recorded and never abort the batch. Output order is by item position
/// regardless of worker scheduling.
EvalResult evaluate(std::span<const BenchmarkItem> items, const EvalOptions& opts);

/// CSV of records: item, origin, method, exam_best, exam_worst, degenerate,
/// mutants, behavior_changing, bc_quantum, bc_classical. Wall time is
/// deliberately absent so output is byte-stable.
std::string records_csv(std::span<const EvalRecord> records);

/// "exam,fraction" ECDF rows for one method and scenario ("best"/"worst").
std::string ecdf_csv(std::span<const EvalRecord> records, const std::string& method,
                     const std::string& scenario);

/// Medians, MBFL-vs-SBFL comparisons (Cliff's delta, one-sided Wilcoxon with
/// alternative "MBFL exam < SBFL exam"), and mutant accounting by operator
/// and category with per-operator averages.
std::string stats_json(const EvalResult& result, const EvalOptions& opts);

/// Directory layout: one subdirectory per item holding buggy.qasm,
/// reference.qasm, tests.json, meta.json (origin and ground_truth).
void save_benchmark(std::span<const BenchmarkItem> items, const std::string& dir);

struct LoadResult {
    std::vector<BenchmarkItem> items; // sorted by directory name
    std::vector<ItemFailure> failures;
};

/// Loads every item subdirectory; invalid items land in failures.
LoadResult load_benchmark(const std::string& dir);

/// Writes records.csv, ecdf_<method>_<scenario>.csv, and stats.json.
void write_eval_outputs(const EvalResult& result, const EvalOptions& opts,
                        const std::string& out_dir);

} // namespace qfl
