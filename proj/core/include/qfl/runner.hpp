#pragma once

#include "qfl/mutate.hpp"
#include "qfl/program.hpp"
#include "qfl/simulator.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace qfl {

struct TestCase {
    std::string name;
    std::map<std::string, double> expected; // bitstring -> probability, sums to 1
    double tolerance = 1e-9;                // max total variation distance to pass
    std::optional<int> shots;               // report-only sampling
    std::optional<std::uint64_t> seed;
};

enum class VerdictKind { Pass, Fail, Timeout, CrashError };

char verdict_letter(VerdictKind k); // P, F, T, E
std::string verdict_name(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::Pass;
    double tvd = 0.0;       // meaningful for Pass and Fail only
    std::set<int> covered;  // empty for Timeout and CrashError
    std::string error;      // diagnostic for CrashError
};

/// Original row plus one row per mutant; rectangular over the suite.
/// A mutant is behavior-changing iff some test's effective pass/fail status
/// differs from the original's on cells where both sides produced evidence
/// (Timeout cells never count; CrashError counts as failing).
struct ExecutionMatrix {
    std::vector<std::string> test_names;
    std::vector<Verdict> original;
    std::vector<std::string> mutant_ids;
    std::vector<std::vector<Verdict>> rows; // rows[m][t]
    std::vector<bool> behavior_changing;    // per mutant
};

double total_variation_distance(const std::map<std::string, double>& p,
                                const std::map<std::string, double>& q);

/// Suite JSON: {"tests":[{"name":..., "expected":{"00":0.5,...},
/// "tolerance":1e-9, "shots":..., "seed":...}]}. Throws SuiteShapeMismatch
/// on malformed shape, non-binary keys, or probabilities not summing to 1.
/// `default_tolerance` applies to tests without an explicit tolerance.
std::vector<TestCase> parse_suite(const std::string& json_text, double default_tolerance = 1e-9);
std::vector<TestCase> load_suite(const std::string& path, double default_tolerance = 1e-9);
std::string suite_to_json(std::span<const TestCase> tests);

Verdict run_test(const Program& p, const TestCase& t, const SimOptions& opts);

/// Runs every test against `p`. Throws SuiteShapeMismatch when the suite is
/// empty or an expected bitstring width differs from p.clbit_count().
std::vector<Verdict> run_suite(const Program& p, std::span<const TestCase> tests,
                               const SimOptions& opts);

/// Runs original and all mutants; cell content is independent of `workers`
/// and of row completion order. Per-cell budget comes from `opts`.
ExecutionMatrix run_matrix(const Program& original, std::span<const Mutant> mutants,
                           std::span<const TestCase> tests, const SimOptions& opts,
                           int workers);

/// CSV: one row per program version, one column per test, cells P/F/T/E.
std::string matrix_csv(const ExecutionMatrix& m);
/// JSON with per-cell verdict kind and tvd, plus behavior-changing flags.
std::string matrix_json(const ExecutionMatrix& m);

} // namespace qfl
