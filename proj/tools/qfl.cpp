// qfl: mutation-based fault localization for small quantum circuit programs.
//
// Subcommands: check, mutate, test, localize, inject, evaluate, compare.
// Exit codes: 0 success, 1 usage or input error, 2 analysis undefined
// (the program under test has no failing tests).

#include "qfl/bench.hpp"
#include "qfl/diff.hpp"
#include "qfl/errors.hpp"
#include "qfl/localize.hpp"
#include "qfl/mutate.hpp"
#include "qfl/parser.hpp"
#include "qfl/runner.hpp"
#include "qfl/simulator.hpp"
#include "qfl/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUndefined = 2;

struct CommonOpts {
    std::string ops_csv = "QGD,QGR,QMD,CRP,AOR,GCR";
    double budget_s = 10.0;
    int workers = 1;
    int max_branches = 4096;
    int qubit_cap = 16;
    double tolerance = 1e-9;
};

qfl::SimOptions sim_options(const CommonOpts& c) {
    qfl::SimOptions sim;
    sim.budget = std::chrono::milliseconds(std::llround(c.budget_s * 1000.0));
    sim.max_branches = c.max_branches;
    sim.qubit_cap = c.qubit_cap;
    return sim;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw qfl::Error("cannot write file: " + path.string());
    out << content;
}

int cmd_check(const std::string& prog_path) {
    const qfl::Program p = qfl::parse_file(prog_path);
    std::printf("%s: ok\n", prog_path.c_str());
    for (const qfl::RegisterDecl& r : p.registers)
        std::printf("  %s %s[%d]\n", r.quantum ? "qreg" : "creg", r.name.c_str(), r.size);
    std::printf("  %zu statements, %d qubits, %d classical bits\n", p.statements.size(),
                p.qubit_count(), p.clbit_count());
    return kExitOk;
}

int cmd_mutate(const std::string& prog_path, const CommonOpts& common,
               const std::string& format) {
    const qfl::Program p = qfl::parse_file(prog_path);
    const auto ops = qfl::parse_operator_set(common.ops_csv);
    const std::vector<qfl::Mutant> mutants = qfl::generate_mutants(p, ops);
    if (format == "table") {
        std::printf("%-14s %-6s %s\n", "id", "stmt", "edit");
        for (const qfl::Mutant& m : mutants)
            std::printf("%-14s %-6d %s\n", m.id.c_str(), m.target_stmt, m.note.c_str());
        std::printf("%zu mutants\n", mutants.size());
    } else {
        json out = json::array();
        for (const qfl::Mutant& m : mutants) {
            json jm;
            jm["id"] = m.id;
            jm["op"] = qfl::op_code(m.op);
            jm["target_stmt"] = m.target_stmt;
            jm["note"] = m.note;
            jm["program"] = qfl::serialize(m.program);
            out.push_back(std::move(jm));
        }
        std::printf("%s\n", out.dump(2).c_str());
    }
    return kExitOk;
}

int cmd_test(const std::string& prog_path, const std::string& suite_path,
             const CommonOpts& common) {
    const qfl::Program p = qfl::parse_file(prog_path);
    const std::vector<qfl::TestCase> suite = qfl::load_suite(suite_path, common.tolerance);
    const qfl::SimOptions sim = sim_options(common);
    const std::vector<qfl::Verdict> row = qfl::run_suite(p, suite, sim);
    int failed = 0;
    for (std::size_t t = 0; t < suite.size(); ++t) {
        const qfl::Verdict& v = row[t];
        if (v.kind == qfl::VerdictKind::Pass || v.kind == qfl::VerdictKind::Fail) {
            std::printf("%-10s %s (tvd %s)\n", qfl::verdict_name(v.kind).c_str(),
                        suite[t].name.c_str(), qfl::format_double(v.tvd).c_str());
        } else {
            std::printf("%-10s %s%s%s\n", qfl::verdict_name(v.kind).c_str(),
                        suite[t].name.c_str(), v.error.empty() ? "" : ": ", v.error.c_str());
        }
        if (v.kind != qfl::VerdictKind::Pass)
            failed++;
        if (suite[t].shots && v.kind != qfl::VerdictKind::Timeout &&
            v.kind != qfl::VerdictKind::CrashError) {
            const qfl::ExecutionTrace trace = qfl::run(p, sim);
            const auto counts =
                qfl::sample(trace, *suite[t].shots, suite[t].seed.value_or(0));
            std::string line = "  sampled:";
            for (const auto& [key, count] : counts)
                line += " " + key + "=" + std::to_string(count);
            std::printf("%s\n", line.c_str());
        }
    }
    std::printf("%zu tests, %d not passing\n", suite.size(), failed);
    return kExitOk; // a suite with failing tests is still a successful run
}

int cmd_localize(const std::string& prog_path, const std::string& suite_path,
                 const CommonOpts& common, bool sbfl, const std::string& reference_path,
                 const std::string& out_dir, bool export_matrix) {
    const qfl::Program p = qfl::parse_file(prog_path);
    const std::vector<qfl::TestCase> suite = qfl::load_suite(suite_path, common.tolerance);
    const auto ops = qfl::parse_operator_set(common.ops_csv);
    const qfl::SimOptions sim = sim_options(common);

    const std::vector<qfl::Mutant> mutants = qfl::generate_mutants(p, ops);
    const qfl::ExecutionMatrix matrix =
        qfl::run_matrix(p, mutants, suite, sim, common.workers);

    std::set<int> faulty;
    if (!reference_path.empty()) {
        const qfl::Program reference = qfl::parse_file(reference_path);
        faulty = qfl::diff_ground_truth(p, reference);
    }

    auto build_report = [&](const std::string& method,
                            const std::vector<double>& scores) -> qfl::SuspiciousnessReport {
        if (!faulty.empty())
            return qfl::rank_and_exam(scores, p, faulty, method);
        return qfl::rank_report(scores, method);
    };

    std::vector<std::pair<qfl::SuspiciousnessReport, bool>> reports; // (report, is_mbfl)
    reports.emplace_back(build_report("muse", qfl::muse_scores(p, matrix, mutants)), true);
    if (sbfl) {
        const std::vector<qfl::Spectrum> spectra = qfl::compute_spectra(p, matrix);
        const bool degenerate = qfl::sbfl_degenerate(matrix);
        auto add = [&](const std::string& method, std::vector<double> scores) {
            reports.emplace_back(build_report(method, scores), false);
            reports.back().first.degenerate = degenerate;
        };
        add("ochiai", qfl::ochiai_scores(spectra));
        add("tarantula", qfl::tarantula_scores(spectra));
    }

    for (const auto& [report, is_mbfl] : reports) {
        std::printf("== %s ==\n", report.method.c_str());
        if (report.degenerate)
            std::fprintf(stderr,
                         "warning: suite is degenerate for SBFL "
                         "(single test, or no passing/failing split)\n");
        std::printf("%s", qfl::report_table(report, p).c_str());
        if (report.has_exam)
            std::printf("exam_best %s%%  exam_worst %s%%\n",
                        qfl::format_double(report.exam_best).c_str(),
                        qfl::format_double(report.exam_worst).c_str());
        write_file(fs::path(out_dir) / ("report_" + report.method + ".json"),
                   qfl::report_json(report, p, is_mbfl ? &matrix : nullptr));
    }
    if (export_matrix) {
        write_file(fs::path(out_dir) / "matrix.csv", qfl::matrix_csv(matrix));
        write_file(fs::path(out_dir) / "matrix.json", qfl::matrix_json(matrix));
    }
    std::printf("reports written to %s\n", out_dir.c_str());
    return kExitOk;
}

int cmd_inject(const std::string& reference_path, const std::string& suite_path,
               const CommonOpts& common, const std::string& out_dir, std::string name,
               int limit) {
    const qfl::Program reference = qfl::parse_file(reference_path);
    const std::vector<qfl::TestCase> suite = qfl::load_suite(suite_path, common.tolerance);
    qfl::InjectOptions opts;
    opts.ops = qfl::parse_operator_set(common.ops_csv);
    opts.sim = sim_options(common);
    if (name.empty())
        name = fs::path(reference_path).stem().string();
    opts.name_prefix = name;

    std::vector<qfl::BenchmarkItem> items = qfl::inject_faults(reference, suite, opts);
    if (limit > 0 && static_cast<int>(items.size()) > limit) {
        // Even stride keeps operator diversity while staying deterministic.
        std::vector<qfl::BenchmarkItem> picked;
        picked.reserve(static_cast<std::size_t>(limit));
        const double stride = static_cast<double>(items.size()) / limit;
        for (int i = 0; i < limit; ++i)
            picked.push_back(items[static_cast<std::size_t>(i * stride)]);
        items = std::move(picked);
    }
    qfl::save_benchmark(items, out_dir);
    std::printf("%zu items written to %s\n", items.size(), out_dir.c_str());
    return kExitOk;
}

int cmd_evaluate(const std::string& bench_dir, const CommonOpts& common,
                 const std::string& methods_csv, const std::string& out_dir) {
    qfl::LoadResult loaded = qfl::load_benchmark(bench_dir);
    for (const qfl::ItemFailure& f : loaded.failures)
        std::fprintf(stderr, "warning: skipping item %s: %s\n", f.item_id.c_str(),
                     f.error.c_str());
    if (loaded.items.empty()) {
        std::fprintf(stderr, "error: no usable benchmark items in %s\n", bench_dir.c_str());
        return kExitInput;
    }

    qfl::EvalOptions opts;
    opts.methods.clear();
    std::stringstream ms(methods_csv);
    for (std::string tok; std::getline(ms, tok, ',');) {
        if (!tok.empty())
            opts.methods.push_back(tok);
    }
    opts.ops = qfl::parse_operator_set(common.ops_csv);
    opts.sim = sim_options(common);
    opts.workers = common.workers;

    const qfl::EvalResult result = qfl::evaluate(loaded.items, opts);
    for (const qfl::ItemFailure& f : result.failures)
        std::fprintf(stderr, "warning: item %s failed: %s\n", f.item_id.c_str(),
                     f.error.c_str());
    qfl::write_eval_outputs(result, opts, out_dir);
    std::printf("%zu records over %zu items; outputs in %s\n", result.records.size(),
                loaded.items.size(), out_dir.c_str());

    if (result.records.empty() && !loaded.items.empty()) {
        const bool undefined = std::any_of(
            result.failures.begin(), result.failures.end(), [](const qfl::ItemFailure& f) {
                return f.error.find("no failing test") != std::string::npos;
            });
        return undefined ? kExitUndefined : kExitInput;
    }
    return kExitOk;
}

int cmd_compare(const std::string& records_path, const std::string& out_path) {
    std::ifstream in(records_path, std::ios::binary);
    if (!in)
        throw qfl::Error("cannot open records file: " + records_path);
    std::string header;
    if (!std::getline(in, header) ||
        header.rfind("item,origin,method,exam_best,exam_worst", 0) != 0)
        throw qfl::Error(records_path + ": not a records.csv produced by evaluate");

    std::vector<qfl::EvalRecord> records;
    std::vector<std::string> methods;
    for (std::string line; std::getline(in, line);) {
        if (line.empty())
            continue;
        std::stringstream ls(line);
        std::vector<std::string> fields;
        for (std::string f; std::getline(ls, f, ',');)
            fields.push_back(f);
        if (fields.size() < 5)
            throw qfl::Error(records_path + ": malformed row: " + line);
        qfl::EvalRecord r;
        r.item_id = fields[0];
        r.origin = fields[1];
        r.method = fields[2];
        r.exam_best = std::stod(fields[3]);
        r.exam_worst = std::stod(fields[4]);
        records.push_back(std::move(r));
        if (std::find(methods.begin(), methods.end(), fields[2]) == methods.end())
            methods.push_back(fields[2]);
    }
    if (records.empty())
        throw qfl::Error(records_path + ": no records");

    qfl::EvalResult result;
    result.records = std::move(records);
    qfl::EvalOptions opts;
    opts.methods = methods;
    const std::string stats = qfl::stats_json(result, opts);
    if (!out_path.empty())
        write_file(out_path, stats);
    std::printf("%s", stats.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mutation-based fault localization for quantum circuit programs"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string prog_path, suite_path, reference_path, bench_dir, records_path;
    std::string out_dir, out_file, format = "json", methods = "muse,ochiai,tarantula";
    std::string name;
    bool sbfl = false, export_matrix = false;
    int limit = 0;

    auto add_common = [&](CLI::App* cmd, bool with_workers) {
        cmd->add_option("--ops", common.ops_csv, "comma-separated mutation operator codes");
        cmd->add_option("--budget", common.budget_s, "per-run budget in seconds (3600 for the full-scale preset)");
        cmd->add_option("--max-branches", common.max_branches, "measurement branch limit");
        cmd->add_option("--qubit-cap", common.qubit_cap, "maximum qubit count");
        cmd->add_option("--tolerance", common.tolerance,
                        "default TVD tolerance for tests without one");
        if (with_workers)
            cmd->add_option("--workers", common.workers, "parallel worker count")
                ->envname("QFL_WORKERS");
    };

    CLI::App* check = app.add_subcommand("check", "parse and validate a program");
    check->add_option("program", prog_path, "program file")->required();

    CLI::App* mutate = app.add_subcommand("mutate", "list first-order mutants");
    mutate->add_option("program", prog_path, "program file")->required();
    mutate->add_option("--format", format, "json or table");
    add_common(mutate, false);

    CLI::App* test = app.add_subcommand("test", "run a test suite");
    test->add_option("program", prog_path, "program file")->required();
    test->add_option("suite", suite_path, "suite JSON file")->required();
    add_common(test, false);

    CLI::App* localize = app.add_subcommand("localize", "rank statements by suspiciousness");
    localize->add_option("program", prog_path, "buggy program file")->required();
    localize->add_option("suite", suite_path, "suite JSON file")->required();
    localize->add_flag("--sbfl", sbfl, "also compute Ochiai and Tarantula");
    localize->add_option("--reference", reference_path,
                         "fixed program; enables EXAM via the edit-script ground truth");
    localize->add_option("--out", out_dir, "report output directory")
        ->default_val("qfl-report");
    localize->add_flag("--export-matrix", export_matrix, "also write matrix.csv/matrix.json");
    add_common(localize, true);

    CLI::App* inject = app.add_subcommand("inject", "build benchmark items by fault injection");
    inject->add_option("reference", reference_path, "reference program file")->required();
    inject->add_option("suite", suite_path, "suite JSON file")->required();
    inject->add_option("--out", out_dir, "benchmark output directory")->required();
    inject->add_option("--name", name, "item name prefix (default: reference stem)");
    inject->add_option("--limit", limit, "keep at most N items (even stride)");
    add_common(inject, false);

    CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate localization on a benchmark");
    evaluate->add_option("benchmark", bench_dir, "benchmark directory")->required();
    evaluate->add_option("--methods", methods, "comma-separated subset of muse,ochiai,tarantula");
    evaluate->add_option("--out", out_dir, "output directory")->default_val("qfl-eval");
    add_common(evaluate, true);

    CLI::App* compare = app.add_subcommand("compare", "statistics from an existing records.csv");
    compare->add_option("records", records_path, "records.csv from evaluate")->required();
    compare->add_option("--out", out_file, "also write stats JSON to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*check)
            return cmd_check(prog_path);
        if (*mutate)
            return cmd_mutate(prog_path, common, format);
        if (*test)
            return cmd_test(prog_path, suite_path, common);
        if (*localize)
            return cmd_localize(prog_path, suite_path, common, sbfl, reference_path, out_dir,
                                export_matrix);
        if (*inject)
            return cmd_inject(reference_path, suite_path, common, out_dir, name, limit);
        if (*evaluate)
            return cmd_evaluate(bench_dir, common, methods, out_dir);
        if (*compare)
            return cmd_compare(records_path, out_file);
    } catch (const qfl::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const qfl::NoFailingTests& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUndefined;
    } catch (const qfl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
    return kExitInput;
}
