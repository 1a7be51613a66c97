#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dsp/trial.hpp"

namespace dsp {

inline constexpr std::size_t kExactRankSumLimit = 10;

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) p-value.
///
/// When both samples have at most ten values the null distribution of the
/// rank sum is enumerated exactly, using mid-ranks for ties, and
/// p = min(1, 2 * min(P(W <= w), P(W >= w))). Larger samples use the normal
/// approximation with tie-corrected variance and a 0.5 continuity
/// correction. Throws std::invalid_argument on an empty sample.
[[nodiscard]] double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Mid-ranks (1-based) of the pooled values, in input order.
[[nodiscard]] std::vector<double> midranks(std::span<const double> values);

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 when n < 2
    double reach_fraction = 0.0;
    friend bool operator==(const Summary&, const Summary&) = default;
};

[[nodiscard]] Summary summarize(std::span<const double> best_eps, std::span<const bool> reached);
[[nodiscard]] Summary summarize(const std::vector<TrialOutcome>& outcomes);

[[nodiscard]] std::vector<double> best_eps(const std::vector<TrialOutcome>& outcomes);

} // namespace dsp
