#include "dsp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace dsp {

std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return values[i] < values[j]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

double exact_p(const std::vector<double>& ranks, std::size_t n, double observed) {
    // doubled mid-ranks are integers, so the DP runs over exact sums
    std::vector<int> doubled;
    doubled.reserve(ranks.size());
    int total = 0;
    for (double r : ranks) {
        doubled.push_back(static_cast<int>(std::lround(2.0 * r)));
        total += doubled.back();
    }
    const int w = static_cast<int>(std::lround(2.0 * observed));

    // ways[j][s]: subsets of size j with doubled rank sum s
    std::vector<std::vector<double>> ways(n + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    ways[0][0] = 1.0;
    for (int r : doubled)
        for (std::size_t j = n; j >= 1; --j)
            for (int s = total; s >= r; --s) ways[j][static_cast<std::size_t>(s)] += ways[j - 1][static_cast<std::size_t>(s - r)];

    double all = 0.0, le = 0.0, ge = 0.0;
    for (int s = 0; s <= total; ++s) {
        const double c = ways[n][static_cast<std::size_t>(s)];
        all += c;
        if (s <= w) le += c;
        if (s >= w) ge += c;
    }
    return std::min(1.0, 2.0 * std::min(le, ge) / all);
}

} // namespace

double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("rank-sum test needs two non-empty samples");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    for (double v : pooled)
        if (!std::isfinite(v)) throw std::invalid_argument("rank-sum test needs finite values");
    const auto ranks = midranks(pooled);
    const double w = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);

    const auto n = static_cast<double>(a.size());
    const auto m = static_cast<double>(b.size());
    if (a.size() <= kExactRankSumLimit && b.size() <= kExactRankSumLimit) return exact_p(ranks, a.size(), w);

    const double big_n = n + m;
    double ties = 0.0;
    {
        std::vector<double> sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            const auto t = static_cast<double>(j - i);
            ties += t * t * t - t;
            i = j;
        }
    }
    const double variance = n * m / 12.0 * ((big_n + 1.0) - ties / (big_n * (big_n - 1.0)));
    if (variance <= 0.0) return 1.0;
    const double u = w - n * (n + 1.0) / 2.0;
    const double z = std::max(0.0, std::abs(u - n * m / 2.0) - 0.5) / std::sqrt(variance);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

Summary summarize(std::span<const double> eps, std::span<const bool> reached) {
    if (eps.size() != reached.size()) throw std::invalid_argument("summarize: column length mismatch");
    Summary s;
    s.n = eps.size();
    if (s.n == 0) return s;
    s.mean = std::accumulate(eps.begin(), eps.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double sq = 0.0;
        for (double v : eps) sq += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(sq / static_cast<double>(s.n - 1));
    }
    const auto hits = std::count(reached.begin(), reached.end(), true);
    s.reach_fraction = static_cast<double>(hits) / static_cast<double>(s.n);
    return s;
}

Summary summarize(const std::vector<TrialOutcome>& outcomes) {
    const auto eps = best_eps(outcomes);
    const auto flags = std::make_unique<bool[]>(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) flags[i] = outcomes[i].result.best_reached;
    return summarize(eps, std::span<const bool>(flags.get(), outcomes.size()));
}

std::vector<double> best_eps(const std::vector<TrialOutcome>& outcomes) {
    std::vector<double> v;
    v.reserve(outcomes.size());
    for (const auto& o : outcomes) v.push_back(o.result.best_ep);
    return v;
}

} // namespace dsp
