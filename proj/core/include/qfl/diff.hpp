#pragma once

#include "qfl/program.hpp"

#include <set>

namespace qfl {

/// Ground-truth fault extraction: statement ids in `buggy` that differ from
/// `reference` under a minimal statement-level edit script. Modified or
/// deleted statements map to themselves; statements present only in the
/// reference (omission faults) map to the nearest preceding buggy statement,
/// or statement 0 if the insertion is at the front. Register declarations do
/// not participate. Throws EmptyDiff when the statement lists are
/// structurally identical.
std::set<int> diff_ground_truth(const Program& buggy, const Program& reference);

} // namespace qfl
