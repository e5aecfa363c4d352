#include "qfl/localize.hpp"
#include "qfl/mutate.hpp"
#include "qfl/parser.hpp"
#include "qfl/runner.hpp"
#include "qfl/simulator.hpp"

#include <benchmark/benchmark.h>

#include <string>

namespace {

std::string ghz_source(int qubits) {
    std::string src = "qreg q[" + std::to_string(qubits) + "];\n";
    src += "creg c[" + std::to_string(qubits) + "];\n";
    src += "h q[0];\n";
    for (int i = 1; i < qubits; ++i)
        src += "cx q[" + std::to_string(i - 1) + "],q[" + std::to_string(i) + "];\n";
    for (int i = 0; i < qubits; ++i)
        src += "measure q[" + std::to_string(i) + "] -> c[" + std::to_string(i) + "];\n";
    return src;
}

void BM_SimulateGhz(benchmark::State& state) {
    const qfl::Program p = qfl::parse(ghz_source(static_cast<int>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(qfl::run(p));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulateGhz)->Arg(3)->Arg(8)->Arg(12);

void BM_GenerateMutants(benchmark::State& state) {
    const qfl::Program p = qfl::parse(ghz_source(static_cast<int>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(qfl::generate_mutants(p));
}
BENCHMARK(BM_GenerateMutants)->Arg(3)->Arg(8);

void BM_MatrixAndScores(benchmark::State& state) {
    const qfl::Program p = qfl::parse(ghz_source(3));
    const auto mutants = qfl::generate_mutants(p);
    const auto suite = qfl::parse_suite(
        R"({"tests":[{"name":"ghz","expected":{"000":0.5,"110":0.5},"tolerance":1e-9}]})");
    for (auto _ : state) {
        const qfl::ExecutionMatrix m =
            qfl::run_matrix(p, mutants, suite, qfl::SimOptions{}, 1);
        benchmark::DoNotOptimize(qfl::muse_scores(p, m, mutants));
    }
    state.SetItemsProcessed(state.iterations() * (mutants.size() + 1));
}
BENCHMARK(BM_MatrixAndScores);

} // namespace

BENCHMARK_MAIN();
