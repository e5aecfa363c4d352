#pragma once

#include <span>
#include <utility>
#include <vector>

namespace qfl {

/// Cliff's delta effect size: (#{x>y} - #{x<y}) / (|xs|*|ys|), in [-1, 1].
/// Throws EmptyInput when either sample is empty.
double cliffs_delta(std::span<const double> xs, std::span<const double> ys);

struct WilcoxonResult {
    double w_plus = 0.0;  // sum of ranks of positive differences
    double w_minus = 0.0;
    int n = 0;            // nonzero differences
    double p_value = 1.0; // P(W+ <= observed) under the null
    bool exact = false;   // exact null distribution vs normal approximation
};

/// One-sided Wilcoxon signed-rank test on pairs (a[i], b[i]) with the
/// alternative hypothesis a < b (small W+ is evidence). Zero differences are
/// dropped; tied |d| get average ranks. Exact null enumeration for n <= 25,
/// normal approximation with tie and continuity corrections above. Throws
/// AllDifferencesZero when no nonzero difference remains and Error on
/// length mismatch or empty input.
WilcoxonResult wilcoxon_one_sided(std::span<const double> a, std::span<const double> b);

/// Empirical CDF: one (value, fraction) step per distinct sample value,
/// ascending, ending at fraction 1. Throws EmptyInput.
std::vector<std::pair<double, double>> ecdf(std::span<const double> xs);

/// Median with the usual midpoint rule for even sizes. Throws EmptyInput.
double median(std::span<const double> xs);

} // namespace qfl
