#include "qfl/bench.hpp"

#include "qfl/diff.hpp"
#include "qfl/errors.hpp"
#include "qfl/parser.hpp"
#include "qfl/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace qfl {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kMethods[] = {"muse", "ochiai", "tarantula"};

bool known_method(const std::string& m) {
    return std::find(std::begin(kMethods), std::end(kMethods), m) != std::end(kMethods);
}

bool failed_cell(VerdictKind k) {
    return k == VerdictKind::Fail || k == VerdictKind::CrashError;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write file: " + path.string());
    out << content;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Evaluates one item into per-method records; throws Error with a
/// diagnostic when the item is unusable.
std::vector<EvalRecord> evaluate_item(const BenchmarkItem& item, const EvalOptions& opts) {
    const auto start = std::chrono::steady_clock::now();

    if (item.ground_truth.empty())
        throw Error("ground truth is empty");
    for (int f : item.ground_truth) {
        if (f < 0 || f >= static_cast<int>(item.buggy.statements.size()))
            throw Error("ground truth statement " + std::to_string(f) + " is out of range");
    }

    const std::vector<Verdict> ref_row = run_suite(item.reference, item.tests, opts.sim);
    for (std::size_t t = 0; t < ref_row.size(); ++t) {
        if (ref_row[t].kind != VerdictKind::Pass)
            throw ReferenceFailsSuite("reference verdict " + verdict_name(ref_row[t].kind) +
                                      " on test '" + item.tests[t].name + "'");
    }

    const std::vector<Mutant> mutants = generate_mutants(item.buggy, opts.ops);
    const ExecutionMatrix matrix = run_matrix(item.buggy, mutants, item.tests, opts.sim, 1);

    const bool any_failing = std::any_of(matrix.original.begin(), matrix.original.end(),
                                         [](const Verdict& v) { return failed_cell(v.kind); });
    if (!any_failing)
        throw NoFailingTests();

    EvalRecord base;
    base.item_id = item.id;
    base.origin = item.origin;
    base.mutants_generated = static_cast<int>(mutants.size());
    for (std::size_t r = 0; r < mutants.size(); ++r) {
        const std::string code = op_code(mutants[r].op);
        base.generated_by_op[code]++;
        if (matrix.behavior_changing[r]) {
            base.bc_by_op[code]++;
            base.bc_total++;
            (is_quantum_op(mutants[r].op) ? base.bc_quantum : base.bc_classical)++;
        }
    }

    std::vector<EvalRecord> records;
    const std::vector<Spectrum> spectra = compute_spectra(item.buggy, matrix);
    for (const std::string& method : opts.methods) {
        std::vector<double> scores;
        bool degenerate = false;
        if (method == "muse") {
            scores = muse_scores(item.buggy, matrix, mutants);
        } else {
            scores = method == "ochiai" ? ochiai_scores(spectra) : tarantula_scores(spectra);
            degenerate = sbfl_degenerate(matrix);
        }
        const SuspiciousnessReport report =
            rank_and_exam(scores, item.buggy, item.ground_truth, method);
        EvalRecord rec = base;
        rec.method = method;
        rec.exam_best = report.exam_best;
        rec.exam_worst = report.exam_worst;
        rec.degenerate = degenerate;
        rec.wall = std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<double> exams_for(std::span<const EvalRecord> records, const std::string& method,
                              bool best, const std::string& origin_prefix) {
    std::vector<double> out;
    for (const EvalRecord& r : records) {
        if (r.method != method)
            continue;
        if (!origin_prefix.empty() && r.origin.rfind(origin_prefix, 0) != 0)
            continue;
        out.push_back(best ? r.exam_best : r.exam_worst);
    }
    return out;
}

json median_or_null(const std::vector<double>& xs) {
    if (xs.empty())
        return nullptr;
    return median(xs);
}

json comparison_json(std::span<const EvalRecord> records, const std::string& sbfl) {
    json out;
    for (bool best : {true, false}) {
        const std::vector<double> mbfl_exams = exams_for(records, "muse", best, "");
        const std::vector<double> sbfl_exams = exams_for(records, sbfl, best, "");
        json side;
        if (mbfl_exams.empty() || mbfl_exams.size() != sbfl_exams.size()) {
            side["n"] = 0;
            side["cliffs_delta"] = nullptr;
            side["p_value"] = nullptr;
        } else {
            side["n"] = mbfl_exams.size();
            side["cliffs_delta"] = cliffs_delta(mbfl_exams, sbfl_exams);
            try {
                side["p_value"] = wilcoxon_one_sided(mbfl_exams, sbfl_exams).p_value;
            } catch (const AllDifferencesZero&) {
                side["p_value"] = nullptr;
                side["note"] = "all paired differences are zero";
            }
        }
        out[best ? "best" : "worst"] = std::move(side);
    }
    return out;
}

} // namespace

std::vector<BenchmarkItem> inject_faults(const Program& reference,
                                         std::span<const TestCase> suite,
                                         const InjectOptions& opts) {
    const std::vector<Verdict> ref_row = run_suite(reference, suite, opts.sim);
    for (std::size_t t = 0; t < ref_row.size(); ++t) {
        if (ref_row[t].kind != VerdictKind::Pass)
            throw ReferenceFailsSuite("reference verdict " + verdict_name(ref_row[t].kind) +
                                      " on test '" + suite[t].name + "'");
    }

    std::vector<BenchmarkItem> items;
    for (const Mutant& m : generate_mutants(reference, opts.ops)) {
        const std::vector<Verdict> row = run_suite(m.program, suite, opts.sim);
        const bool timed_out = std::any_of(row.begin(), row.end(), [](const Verdict& v) {
            return v.kind == VerdictKind::Timeout;
        });
        const bool fails = std::any_of(row.begin(), row.end(),
                                       [](const Verdict& v) { return failed_cell(v.kind); });
        if (timed_out || !fails)
            continue; // equivalent within tolerance, or no usable evidence
        BenchmarkItem item;
        item.id = opts.name_prefix + "-" + m.id;
        item.buggy = m.program;
        item.reference = reference;
        item.tests.assign(suite.begin(), suite.end());
        item.ground_truth = diff_ground_truth(item.buggy, reference);
        item.origin = "injected:" + op_code(m.op);
        items.push_back(std::move(item));
    }
    return items;
}

EvalResult evaluate(std::span<const BenchmarkItem> items, const EvalOptions& opts) {
    for (const std::string& m : opts.methods) {
        if (!known_method(m))
            throw Error("unknown localization method '" + m + "'");
    }

    struct Slot {
        std::vector<EvalRecord> records;
        std::string error;
    };
    std::vector<Slot> slots(items.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size())
                return;
            try {
                slots[i].records = evaluate_item(items[i], opts);
            } catch (const Error& e) {
                slots[i].error = e.what();
            }
        }
    };
    const std::size_t n_workers =
        std::min(static_cast<std::size_t>(std::max(1, opts.workers)), std::max<std::size_t>(items.size(), 1));
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w)
            pool.emplace_back(work);
        for (std::thread& th : pool)
            th.join();
    }

    EvalResult result;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!slots[i].error.empty())
            result.failures.push_back({items[i].id, slots[i].error});
        for (EvalRecord& r : slots[i].records)
            result.records.push_back(std::move(r));
    }
    return result;
}

std::string records_csv(std::span<const EvalRecord> records) {
    std::string out = "item,origin,method,exam_best,exam_worst,degenerate,mutants,"
                      "behavior_changing,bc_quantum,bc_classical\n";
    for (const EvalRecord& r : records) {
        out += r.item_id + "," + r.origin + "," + r.method + "," + format_double(r.exam_best) +
               "," + format_double(r.exam_worst) + "," + (r.degenerate ? "1" : "0") + "," +
               std::to_string(r.mutants_generated) + "," + std::to_string(r.bc_total) + "," +
               std::to_string(r.bc_quantum) + "," + std::to_string(r.bc_classical) + "\n";
    }
    return out;
}

std::string ecdf_csv(std::span<const EvalRecord> records, const std::string& method,
                     const std::string& scenario) {
    std::string out = "exam,fraction\n";
    const std::vector<double> exams = exams_for(records, method, scenario == "best", "");
    if (exams.empty())
        return out;
    for (const auto& [value, fraction] : ecdf(exams))
        out += format_double(value) + "," + format_double(fraction) + "\n";
    return out;
}

std::string stats_json(const EvalResult& result, const EvalOptions& opts) {
    json root;

    std::vector<std::string> item_ids;
    int injected = 0, curated = 0;
    for (const EvalRecord& r : result.records) {
        if (std::find(item_ids.begin(), item_ids.end(), r.item_id) != item_ids.end())
            continue;
        item_ids.push_back(r.item_id);
        if (r.origin.rfind("injected", 0) == 0)
            injected++;
        else
            curated++;
    }
    root["items"]["evaluated"] = item_ids.size();
    root["items"]["skipped"] = result.failures.size();
    root["items"]["injected"] = injected;
    root["items"]["curated"] = curated;

    for (const std::string& method : opts.methods) {
        for (bool best : {true, false}) {
            const char* scenario = best ? "best" : "worst";
            root["medians"][method][scenario]["all"] =
                median_or_null(exams_for(result.records, method, best, ""));
            root["medians"][method][scenario]["injected"] =
                median_or_null(exams_for(result.records, method, best, "injected"));
            root["medians"][method][scenario]["curated"] =
                median_or_null(exams_for(result.records, method, best, "curated"));
        }
    }

    const bool has_muse =
        std::find(opts.methods.begin(), opts.methods.end(), "muse") != opts.methods.end();
    root["comparisons"] = json::object();
    if (has_muse) {
        for (const char* sbfl : {"ochiai", "tarantula"}) {
            if (std::find(opts.methods.begin(), opts.methods.end(), sbfl) == opts.methods.end())
                continue;
            root["comparisons"][std::string("muse_vs_") + sbfl] =
                comparison_json(result.records, sbfl);
        }
    }

    // Mutant accounting is per item; every record of an item repeats it, so
    // take the first record per item.
    std::map<std::string, int> gen_by_op, bc_by_op;
    {
        std::vector<std::string> seen;
        for (const EvalRecord& r : result.records) {
            if (std::find(seen.begin(), seen.end(), r.item_id) != seen.end())
                continue;
            seen.push_back(r.item_id);
            for (const auto& [code, count] : r.generated_by_op)
                gen_by_op[code] += count;
            for (const auto& [code, count] : r.bc_by_op)
                bc_by_op[code] += count;
        }
    }
    root["mutants"]["by_operator"] = json::object();
    for (MutationOp op : opts.ops) {
        const std::string code = op_code(op);
        root["mutants"]["by_operator"][code]["generated"] =
            gen_by_op.count(code) ? gen_by_op[code] : 0;
        root["mutants"]["by_operator"][code]["behavior_changing"] =
            bc_by_op.count(code) ? bc_by_op[code] : 0;
    }
    for (bool quantum : {true, false}) {
        int ops_in_category = 0, generated = 0, bc = 0;
        for (MutationOp op : opts.ops) {
            if (is_quantum_op(op) != quantum)
                continue;
            ops_in_category++;
            const std::string code = op_code(op);
            generated += gen_by_op.count(code) ? gen_by_op[code] : 0;
            bc += bc_by_op.count(code) ? bc_by_op[code] : 0;
        }
        json cat;
        cat["operators"] = ops_in_category;
        cat["generated"] = generated;
        cat["behavior_changing"] = bc;
        cat["avg_bc_per_operator"] =
            ops_in_category == 0 ? json(nullptr)
                                 : json(static_cast<double>(bc) / ops_in_category);
        root["mutants"]["by_category"][quantum ? "quantum" : "classical"] = std::move(cat);
    }

    root["skipped"] = json::array();
    for (const ItemFailure& f : result.failures) {
        json jf;
        jf["item"] = f.item_id;
        jf["error"] = f.error;
        root["skipped"].push_back(std::move(jf));
    }

    return root.dump(2) + "\n";
}

void save_benchmark(std::span<const BenchmarkItem> items, const std::string& dir) {
    for (const BenchmarkItem& item : items) {
        const fs::path item_dir = fs::path(dir) / item.id;
        fs::create_directories(item_dir);
        write_text(item_dir / "buggy.qasm", serialize(item.buggy));
        write_text(item_dir / "reference.qasm", serialize(item.reference));
        write_text(item_dir / "tests.json", suite_to_json(item.tests));
        json meta;
        meta["origin"] = item.origin;
        meta["ground_truth"] = item.ground_truth;
        write_text(item_dir / "meta.json", meta.dump(2) + "\n");
    }
}

LoadResult load_benchmark(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw Error("benchmark directory does not exist: " + dir);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory())
            names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());

    LoadResult result;
    for (const std::string& name : names) {
        const fs::path item_dir = fs::path(dir) / name;
        try {
            BenchmarkItem item;
            item.id = name;
            item.buggy = parse_file((item_dir / "buggy.qasm").string());
            item.reference = parse_file((item_dir / "reference.qasm").string());
            item.tests = load_suite((item_dir / "tests.json").string());

            json meta;
            try {
                meta = json::parse(read_text(item_dir / "meta.json"));
            } catch (const json::parse_error& e) {
                throw Error(std::string("meta.json is not valid JSON: ") + e.what());
            }
            if (!meta.is_object() || !meta.contains("ground_truth") ||
                !meta["ground_truth"].is_array() || meta["ground_truth"].empty())
                throw Error("meta.json must carry a nonempty ground_truth array");
            for (const json& v : meta["ground_truth"]) {
                if (!v.is_number_integer())
                    throw Error("ground_truth entries must be integers");
                const int id = v.get<int>();
                if (id < 0 || id >= static_cast<int>(item.buggy.statements.size()))
                    throw Error("ground_truth statement " + std::to_string(id) +
                                " is out of range");
                item.ground_truth.insert(id);
            }
            item.origin = meta.contains("origin") && meta["origin"].is_string()
                              ? meta["origin"].get<std::string>()
                              : "curated";
            result.items.push_back(std::move(item));
        } catch (const Error& e) {
            result.failures.push_back({name, e.what()});
        }
    }
    return result;
}

void write_eval_outputs(const EvalResult& result, const EvalOptions& opts,
                        const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "records.csv", records_csv(result.records));
    for (const std::string& method : opts.methods) {
        for (const char* scenario : {"best", "worst"}) {
            write_text(fs::path(out_dir) / ("ecdf_" + method + "_" + scenario + ".csv"),
                       ecdf_csv(result.records, method, scenario));
        }
    }
    write_text(fs::path(out_dir) / "stats.json", stats_json(result, opts));
}

} // namespace qfl
