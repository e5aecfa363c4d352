#include "qfl/diff.hpp"

#include "qfl/errors.hpp"

#include <vector>

namespace qfl {

namespace {

enum class EditKind { Match, Delete, Insert };

struct Edit {
    EditKind kind;
    int buggy_pos;
    int ref_pos;
};

// Minimal edit script via LCS. Ties prefer deletions so that a substitution
// becomes a delete+insert pair inside one hunk.
std::vector<Edit> edit_script(const Program& buggy, const Program& reference) {
    const auto& a = buggy.statements;
    const auto& b = reference.statements;
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());

    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (int i = n - 1; i >= 0; --i) {
        for (int j = m - 1; j >= 0; --j) {
            if (a[i].structurally_equal(b[j]))
                lcs[i][j] = lcs[i + 1][j + 1] + 1;
            else
                lcs[i][j] = std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }

    std::vector<Edit> script;
    int i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i].structurally_equal(b[j])) {
            script.push_back({EditKind::Match, i, j});
            ++i, ++j;
        } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
            script.push_back({EditKind::Delete, i, j});
            ++i;
        } else {
            script.push_back({EditKind::Insert, i, j});
            ++j;
        }
    }
    for (; i < n; ++i) script.push_back({EditKind::Delete, i, j});
    for (; j < m; ++j) script.push_back({EditKind::Insert, i, j});
    return script;
}

} // namespace

std::set<int> diff_ground_truth(const Program& buggy, const Program& reference) {
    auto script = edit_script(buggy, reference);

    std::set<int> result;
    size_t k = 0;
    while (k < script.size()) {
        if (script[k].kind == EditKind::Match) {
            ++k;
            continue;
        }
        // collect one hunk of consecutive non-match edits
        size_t end = k;
        bool has_delete = false;
        while (end < script.size() && script[end].kind != EditKind::Match) {
            has_delete |= script[end].kind == EditKind::Delete;
            ++end;
        }
        if (has_delete) {
            for (size_t e = k; e < end; ++e)
                if (script[e].kind == EditKind::Delete) result.insert(script[e].buggy_pos);
        } else {
            // pure insertion before buggy statement buggy_pos
            int anchor = script[k].buggy_pos > 0 ? script[k].buggy_pos - 1 : 0;
            result.insert(anchor);
        }
        k = end;
    }

    if (result.empty()) throw EmptyDiff();
    return result;
}

} // namespace qfl
