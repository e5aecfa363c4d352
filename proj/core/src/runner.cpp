#include "qfl/runner.hpp"

#include "qfl/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace qfl {

namespace {

using nlohmann::json;

void validate_test(const TestCase& t, std::size_t index) {
    if (t.name.empty())
        throw SuiteShapeMismatch("test " + std::to_string(index) + " has no name");
    if (t.expected.empty())
        throw SuiteShapeMismatch("test '" + t.name + "' has an empty expected distribution");
    if (!(t.tolerance >= 0.0 && t.tolerance <= 1.0))
        throw SuiteShapeMismatch("test '" + t.name + "' tolerance must be in [0,1]");
    const std::size_t width = t.expected.begin()->first.size();
    double sum = 0.0;
    for (const auto& [key, prob] : t.expected) {
        if (key.size() != width)
            throw SuiteShapeMismatch("test '" + t.name + "' mixes bitstring widths");
        if (key.find_first_not_of("01") != std::string::npos)
            throw SuiteShapeMismatch("test '" + t.name + "' has non-binary key '" + key + "'");
        if (prob < 0.0)
            throw SuiteShapeMismatch("test '" + t.name + "' has a negative probability");
        sum += prob;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw SuiteShapeMismatch("test '" + t.name + "' probabilities sum to " +
                                 format_double(sum) + ", expected 1");
    if (t.shots && *t.shots <= 0)
        throw SuiteShapeMismatch("test '" + t.name + "' shots must be positive");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

bool effective_fail(VerdictKind k) {
    return k == VerdictKind::Fail || k == VerdictKind::CrashError;
}

json verdict_to_json(const Verdict& v, bool with_coverage) {
    json cell;
    cell["kind"] = verdict_name(v.kind);
    if (v.kind == VerdictKind::Pass || v.kind == VerdictKind::Fail)
        cell["tvd"] = v.tvd;
    if (!v.error.empty())
        cell["error"] = v.error;
    if (with_coverage)
        cell["covered"] = v.covered;
    return cell;
}

} // namespace

char verdict_letter(VerdictKind k) {
    switch (k) {
    case VerdictKind::Pass: return 'P';
    case VerdictKind::Fail: return 'F';
    case VerdictKind::Timeout: return 'T';
    case VerdictKind::CrashError: return 'E';
    }
    return '?';
}

std::string verdict_name(VerdictKind k) {
    switch (k) {
    case VerdictKind::Pass: return "Pass";
    case VerdictKind::Fail: return "Fail";
    case VerdictKind::Timeout: return "Timeout";
    case VerdictKind::CrashError: return "CrashError";
    }
    return "?";
}

double total_variation_distance(const std::map<std::string, double>& p,
                                const std::map<std::string, double>& q) {
    double sum = 0.0;
    auto it_p = p.begin();
    auto it_q = q.begin();
    while (it_p != p.end() || it_q != q.end()) {
        if (it_q == q.end() || (it_p != p.end() && it_p->first < it_q->first)) {
            sum += std::abs(it_p->second);
            ++it_p;
        } else if (it_p == p.end() || it_q->first < it_p->first) {
            sum += std::abs(it_q->second);
            ++it_q;
        } else {
            sum += std::abs(it_p->second - it_q->second);
            ++it_p;
            ++it_q;
        }
    }
    return 0.5 * sum;
}

std::vector<TestCase> parse_suite(const std::string& json_text, double default_tolerance) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SuiteShapeMismatch(std::string("suite is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("tests") || !root["tests"].is_array())
        throw SuiteShapeMismatch("suite must be an object with a \"tests\" array");
    const json& tests = root["tests"];
    if (tests.empty())
        throw SuiteShapeMismatch("suite contains no tests");

    std::vector<TestCase> suite;
    suite.reserve(tests.size());
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const json& jt = tests[i];
        if (!jt.is_object())
            throw SuiteShapeMismatch("test " + std::to_string(i) + " is not an object");
        TestCase t;
        t.tolerance = default_tolerance;
        if (jt.contains("name")) {
            if (!jt["name"].is_string())
                throw SuiteShapeMismatch("test " + std::to_string(i) + " name is not a string");
            t.name = jt["name"].get<std::string>();
        }
        if (jt.contains("expected")) {
            if (!jt["expected"].is_object())
                throw SuiteShapeMismatch("test " + std::to_string(i) +
                                         " expected is not an object");
            for (const auto& [key, value] : jt["expected"].items()) {
                if (!value.is_number())
                    throw SuiteShapeMismatch("test " + std::to_string(i) + " probability for '" +
                                             key + "' is not a number");
                t.expected[key] = value.get<double>();
            }
        }
        if (jt.contains("tolerance")) {
            if (!jt["tolerance"].is_number())
                throw SuiteShapeMismatch("test " + std::to_string(i) +
                                         " tolerance is not a number");
            t.tolerance = jt["tolerance"].get<double>();
        }
        if (jt.contains("shots")) {
            if (!jt["shots"].is_number_integer())
                throw SuiteShapeMismatch("test " + std::to_string(i) + " shots is not an integer");
            t.shots = jt["shots"].get<int>();
        }
        if (jt.contains("seed")) {
            if (!jt["seed"].is_number_integer())
                throw SuiteShapeMismatch("test " + std::to_string(i) + " seed is not an integer");
            t.seed = jt["seed"].get<std::uint64_t>();
        }
        validate_test(t, i);
        suite.push_back(std::move(t));
    }
    return suite;
}

std::vector<TestCase> load_suite(const std::string& path, double default_tolerance) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open suite file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_suite(buf.str(), default_tolerance);
    } catch (SuiteShapeMismatch& e) {
        throw SuiteShapeMismatch(path + ": " + e.what());
    }
}

std::string suite_to_json(std::span<const TestCase> tests) {
    json root;
    root["tests"] = json::array();
    for (const TestCase& t : tests) {
        json jt;
        jt["name"] = t.name;
        jt["expected"] = json::object();
        for (const auto& [key, prob] : t.expected)
            jt["expected"][key] = prob;
        jt["tolerance"] = t.tolerance;
        if (t.shots)
            jt["shots"] = *t.shots;
        if (t.seed)
            jt["seed"] = *t.seed;
        root["tests"].push_back(std::move(jt));
    }
    return root.dump(2) + "\n";
}

Verdict run_test(const Program& p, const TestCase& t, const SimOptions& opts) {
    Verdict v;
    ExecutionTrace trace;
    try {
        trace = run(p, opts);
    } catch (const SimError& e) {
        if (e.kind() == SimErrorKind::BudgetExceeded) {
            v.kind = VerdictKind::Timeout;
        } else {
            v.kind = VerdictKind::CrashError;
            v.error = e.what();
        }
        return v;
    } catch (const Error& e) {
        v.kind = VerdictKind::CrashError;
        v.error = e.what();
        return v;
    }
    v.tvd = total_variation_distance(trace.distribution, t.expected);
    v.kind = v.tvd <= t.tolerance ? VerdictKind::Pass : VerdictKind::Fail;
    v.covered = trace.covered_ids();
    return v;
}

std::vector<Verdict> run_suite(const Program& p, std::span<const TestCase> tests,
                               const SimOptions& opts) {
    if (tests.empty())
        throw SuiteShapeMismatch("suite is empty");
    const std::size_t width = static_cast<std::size_t>(p.clbit_count());
    for (const TestCase& t : tests) {
        for (const auto& [key, prob] : t.expected) {
            if (key.size() != width)
                throw SuiteShapeMismatch("test '" + t.name + "' expects bitstrings of width " +
                                         std::to_string(key.size()) + " but the program has " +
                                         std::to_string(width) + " classical bits");
        }
    }
    std::vector<Verdict> row;
    row.reserve(tests.size());
    for (const TestCase& t : tests)
        row.push_back(run_test(p, t, opts));
    return row;
}

ExecutionMatrix run_matrix(const Program& original, std::span<const Mutant> mutants,
                           std::span<const TestCase> tests, const SimOptions& opts,
                           int workers) {
    ExecutionMatrix m;
    m.test_names.reserve(tests.size());
    for (const TestCase& t : tests)
        m.test_names.push_back(t.name);

    m.original = run_suite(original, tests, opts);
    m.mutant_ids.reserve(mutants.size());
    for (const Mutant& mut : mutants)
        m.mutant_ids.push_back(mut.id);
    m.rows.resize(mutants.size());

    // Row slots are preallocated and each worker claims whole rows off an
    // atomic counter, so the result is independent of scheduling.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t row = next.fetch_add(1);
            if (row >= mutants.size())
                return;
            m.rows[row] = run_suite(mutants[row].program, tests, opts);
        }
    };
    const int n_workers = std::max(1, workers);
    if (n_workers == 1 || mutants.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const std::size_t spawn = std::min(static_cast<std::size_t>(n_workers), mutants.size());
        pool.reserve(spawn);
        for (std::size_t w = 0; w < spawn; ++w)
            pool.emplace_back(work);
        for (std::thread& th : pool)
            th.join();
    }

    m.behavior_changing.assign(mutants.size(), false);
    for (std::size_t row = 0; row < m.rows.size(); ++row) {
        for (std::size_t t = 0; t < tests.size(); ++t) {
            const VerdictKind a = m.original[t].kind;
            const VerdictKind b = m.rows[row][t].kind;
            if (a == VerdictKind::Timeout || b == VerdictKind::Timeout)
                continue;
            if (effective_fail(a) != effective_fail(b)) {
                m.behavior_changing[row] = true;
                break;
            }
        }
    }
    return m;
}

std::string matrix_csv(const ExecutionMatrix& m) {
    std::string out = "id";
    for (const std::string& name : m.test_names)
        out += "," + csv_field(name);
    out += "\n";
    auto append_row = [&](const std::string& id, const std::vector<Verdict>& row) {
        out += csv_field(id);
        for (const Verdict& v : row) {
            out += ',';
            out += verdict_letter(v.kind);
        }
        out += "\n";
    };
    append_row("original", m.original);
    for (std::size_t r = 0; r < m.rows.size(); ++r)
        append_row(m.mutant_ids[r], m.rows[r]);
    return out;
}

std::string matrix_json(const ExecutionMatrix& m) {
    json root;
    root["tests"] = m.test_names;
    root["original"] = json::array();
    for (const Verdict& v : m.original)
        root["original"].push_back(verdict_to_json(v, true));
    root["mutants"] = json::array();
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        json row;
        row["id"] = m.mutant_ids[r];
        row["behavior_changing"] = static_cast<bool>(m.behavior_changing[r]);
        row["verdicts"] = json::array();
        for (const Verdict& v : m.rows[r])
            row["verdicts"].push_back(verdict_to_json(v, false));
        root["mutants"].push_back(std::move(row));
    }
    return root.dump(2) + "\n";
}

} // namespace qfl
