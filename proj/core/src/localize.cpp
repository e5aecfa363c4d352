#include "qfl/localize.hpp"

#include "qfl/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace qfl {

namespace {

using nlohmann::json;

bool failed_cell(VerdictKind k) {
    return k == VerdictKind::Fail || k == VerdictKind::CrashError;
}

/// Indices of tests with a usable original verdict (anything but Timeout).
std::vector<std::size_t> usable_tests(const ExecutionMatrix& m) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < m.original.size(); ++t) {
        if (m.original[t].kind != VerdictKind::Timeout)
            out.push_back(t);
    }
    return out;
}

} // namespace

std::vector<Spectrum> compute_spectra(const Program& p, const ExecutionMatrix& m) {
    std::vector<Spectrum> spectra(p.statements.size());
    for (std::size_t t : usable_tests(m)) {
        const Verdict& v = m.original[t];
        const bool failed = failed_cell(v.kind);
        for (std::size_t s = 0; s < spectra.size(); ++s) {
            const bool covers = v.covered.count(static_cast<int>(s)) > 0;
            Spectrum& sp = spectra[s];
            if (failed)
                (covers ? sp.ef : sp.nf)++;
            else
                (covers ? sp.ep : sp.np)++;
        }
    }
    return spectra;
}

std::vector<double> muse_scores(const Program& p, const ExecutionMatrix& m,
                                std::span<const Mutant> mutants) {
    const std::vector<std::size_t> tests = usable_tests(m);
    std::vector<std::size_t> failing;
    for (std::size_t t : tests) {
        if (failed_cell(m.original[t].kind))
            failing.push_back(t);
    }
    if (failing.empty())
        throw NoFailingTests();

    // Mutants giving no evidence on some test give none anywhere.
    std::vector<bool> usable_mutant(m.rows.size(), true);
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        for (const Verdict& v : m.rows[r]) {
            if (v.kind == VerdictKind::Timeout) {
                usable_mutant[r] = false;
                break;
            }
        }
    }

    const auto by_stmt = mut_of(mutants);
    std::vector<double> scores(p.statements.size(), 0.0);
    for (std::size_t s = 0; s < scores.size(); ++s) {
        std::vector<std::size_t> f_p;
        for (std::size_t t : failing) {
            if (m.original[t].covered.count(static_cast<int>(s)) > 0)
                f_p.push_back(t);
        }
        if (f_p.empty())
            continue;
        auto it = by_stmt.find(static_cast<int>(s));
        if (it == by_stmt.end())
            continue;
        double sum = 0.0;
        int considered = 0;
        for (std::size_t r : it->second) {
            if (!usable_mutant[r])
                continue;
            considered++;
            int fixed = 0;
            for (std::size_t t : f_p) {
                if (m.rows[r][t].kind == VerdictKind::Pass)
                    fixed++;
            }
            sum += static_cast<double>(fixed) / static_cast<double>(f_p.size());
        }
        if (considered > 0)
            scores[s] = sum / considered;
    }
    return scores;
}

std::vector<double> ochiai_scores(std::span<const Spectrum> spectra) {
    std::vector<double> scores(spectra.size(), 0.0);
    for (std::size_t s = 0; s < spectra.size(); ++s) {
        const Spectrum& sp = spectra[s];
        const double denom =
            std::sqrt(static_cast<double>(sp.ef + sp.nf) * static_cast<double>(sp.ef + sp.ep));
        scores[s] = denom == 0.0 ? 0.0 : sp.ef / denom;
    }
    return scores;
}

std::vector<double> tarantula_scores(std::span<const Spectrum> spectra) {
    std::vector<double> scores(spectra.size(), 0.0);
    for (std::size_t s = 0; s < spectra.size(); ++s) {
        const Spectrum& sp = spectra[s];
        const double ft = sp.ef + sp.nf == 0 ? 0.0 : static_cast<double>(sp.ef) / (sp.ef + sp.nf);
        const double pt = sp.ep + sp.np == 0 ? 0.0 : static_cast<double>(sp.ep) / (sp.ep + sp.np);
        scores[s] = ft + pt == 0.0 ? 0.0 : ft / (ft + pt);
    }
    return scores;
}

bool sbfl_degenerate(const ExecutionMatrix& m) {
    int passed = 0, failed = 0;
    for (std::size_t t : usable_tests(m))
        (failed_cell(m.original[t].kind) ? failed : passed)++;
    return m.original.size() == 1 || passed == 0 || failed == 0;
}

std::vector<RankEntry> rank_statements(std::span<const double> scores) {
    std::vector<RankEntry> entries(scores.size());
    for (std::size_t s = 0; s < scores.size(); ++s) {
        int better = 0, ties = 0;
        for (double other : scores) {
            if (other > scores[s])
                better++;
            else if (other == scores[s])
                ties++;
        }
        entries[s].id = static_cast<int>(s);
        entries[s].score = scores[s];
        entries[s].best_rank = 1 + better;
        entries[s].worst_rank = better + ties; // best + (ties - 1)
    }
    std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.id < b.id;
    });
    return entries;
}

SuspiciousnessReport rank_report(std::span<const double> scores, const std::string& method) {
    SuspiciousnessReport report;
    report.method = method;
    report.ranked = rank_statements(scores);
    return report;
}

SuspiciousnessReport rank_and_exam(std::span<const double> scores, const Program& p,
                                   const std::set<int>& faulty, const std::string& method) {
    if (faulty.empty())
        throw EmptyFaultSet();
    for (int f : faulty) {
        if (f < 0 || f >= static_cast<int>(p.statements.size()))
            throw Error("faulty statement id " + std::to_string(f) + " is out of range");
    }
    if (scores.size() != p.statements.size())
        throw Error("score vector length does not match statement count");

    SuspiciousnessReport report = rank_report(scores, method);
    const double n = static_cast<double>(p.statements.size());
    int best = static_cast<int>(p.statements.size()) + 1;
    int worst = best;
    for (const RankEntry& e : report.ranked) {
        if (faulty.count(e.id) > 0) {
            best = std::min(best, e.best_rank);
            worst = std::min(worst, e.worst_rank);
        }
    }
    report.has_exam = true;
    report.exam_best = 100.0 * best / n;
    report.exam_worst = 100.0 * worst / n;
    return report;
}

std::string report_json(const SuspiciousnessReport& report, const Program& p,
                        const ExecutionMatrix* matrix) {
    json root;
    root["method"] = report.method;
    root["degenerate"] = report.degenerate;
    if (report.has_exam) {
        root["exam_best"] = report.exam_best;
        root["exam_worst"] = report.exam_worst;
    }
    root["statements"] = json::array();
    for (const RankEntry& e : report.ranked) {
        const Statement& s = p.statements[static_cast<std::size_t>(e.id)];
        json js;
        js["id"] = e.id;
        js["line"] = s.line;
        js["text"] = serialize_statement(s);
        js["score"] = e.score;
        js["best_rank"] = e.best_rank;
        js["worst_rank"] = e.worst_rank;
        root["statements"].push_back(std::move(js));
    }
    if (matrix != nullptr) {
        root["mutants"] = json::array();
        for (std::size_t r = 0; r < matrix->mutant_ids.size(); ++r) {
            json jm;
            jm["id"] = matrix->mutant_ids[r];
            jm["behavior_changing"] = static_cast<bool>(matrix->behavior_changing[r]);
            root["mutants"].push_back(std::move(jm));
        }
    }
    return root.dump(2) + "\n";
}

std::string report_table(const SuspiciousnessReport& report, const Program& p) {
    std::string out = "rank  score     stmt  text";
    if (report.degenerate)
        out += "   (degenerate suite: ranking carries no signal)";
    out += "\n";
    for (const RankEntry& e : report.ranked) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%4d  %-8.6g  %4d  ", e.best_rank, e.score, e.id);
        out += buf;
        out += serialize_statement(p.statements[static_cast<std::size_t>(e.id)]);
        if (e.worst_rank != e.best_rank) {
            std::snprintf(buf, sizeof buf, "  (worst rank %d)", e.worst_rank);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace qfl
