#include "qfl/stats.hpp"

#include "qfl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qfl {

namespace {

/// Average ranks of |d| values, ascending, ties averaged. Returned ranks are
/// doubled so they stay exact integers (a tie of two yields .5 ranks).
std::vector<long long> doubled_ranks(const std::vector<double>& abs_d) {
    const std::size_t n = abs_d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
    std::vector<long long> dranks(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]])
            ++j;
        // Positions i..j (0-based) share ranks i+1..j+1; average doubled.
        const long long doubled_avg = static_cast<long long>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            dranks[order[k]] = doubled_avg;
        i = j + 1;
    }
    return dranks;
}

/// P(W+ <= w) with doubled-rank statistic, by subset-sum counting over the
/// 2^n sign assignments. Counts fit a double exactly for n <= 25.
double exact_p(const std::vector<long long>& dranks, long long dw) {
    const long long total = std::accumulate(dranks.begin(), dranks.end(), 0LL);
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    long long reached = 0;
    for (long long r : dranks) {
        reached += r;
        for (long long s = reached; s >= r; --s)
            count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - r)];
    }
    double below = 0.0;
    for (long long s = 0; s <= std::min(dw, total); ++s)
        below += count[static_cast<std::size_t>(s)];
    return below / std::ldexp(1.0, static_cast<int>(dranks.size()));
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace

double cliffs_delta(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty())
        throw EmptyInput("cliffs_delta requires nonempty samples");
    long long greater = 0, less = 0;
    for (double x : xs) {
        for (double y : ys) {
            if (x > y)
                ++greater;
            else if (x < y)
                ++less;
        }
    }
    return static_cast<double>(greater - less) /
           (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

WilcoxonResult wilcoxon_one_sided(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error("wilcoxon_one_sided requires paired samples of equal length");
    if (a.empty())
        throw EmptyInput("wilcoxon_one_sided requires at least one pair");

    std::vector<double> diff;
    diff.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0)
            diff.push_back(d);
    }
    if (diff.empty())
        throw AllDifferencesZero();

    std::vector<double> abs_d(diff.size());
    std::transform(diff.begin(), diff.end(), abs_d.begin(),
                   [](double d) { return std::abs(d); });
    const std::vector<long long> dranks = doubled_ranks(abs_d);

    WilcoxonResult res;
    res.n = static_cast<int>(diff.size());
    long long dw_plus = 0, dw_total = 0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        dw_total += dranks[i];
        if (diff[i] > 0.0)
            dw_plus += dranks[i];
    }
    res.w_plus = static_cast<double>(dw_plus) / 2.0;
    res.w_minus = static_cast<double>(dw_total - dw_plus) / 2.0;

    if (res.n <= 25) {
        res.exact = true;
        res.p_value = exact_p(dranks, dw_plus);
        return res;
    }

    const double n = static_cast<double>(res.n);
    const double mean = n * (n + 1.0) / 4.0;
    double tie_term = 0.0;
    {
        std::vector<double> sorted = abs_d;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
                ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    // Continuity correction: the discrete event {W+ <= w} is approximated by
    // the continuous mass up to w + 1/2.
    const double z = (res.w_plus + 0.5 - mean) / std::sqrt(var);
    res.p_value = normal_cdf(z);
    return res;
}

std::vector<std::pair<double, double>> ecdf(std::span<const double> xs) {
    if (xs.empty())
        throw EmptyInput("ecdf requires a nonempty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> steps;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i])
            continue;
        steps.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
    }
    return steps;
}

double median(std::span<const double> xs) {
    if (xs.empty())
        throw EmptyInput("median requires a nonempty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    if (sorted.size() % 2 == 1)
        return sorted[mid];
    return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

} // namespace qfl
