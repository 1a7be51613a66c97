#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsp/hillclimb.hpp"
#include "dsp/maze.hpp"
#include "dsp/plasticity.hpp"
#include "dsp/stats.hpp"
#include "dsp/trial.hpp"

namespace dsp {

struct ReplaySpec {
    TrialGrid grid{5, kFinalCount};
    int episodes = 100;
    std::optional<int> resample_every;
    std::uint64_t seed = 1;
    int threads = 1;
};

/// Trains fresh networks with the rule on every cell of the grid.
[[nodiscard]] std::vector<TrialOutcome> replay_dsp(const Maze& maze, const DspRule& rule, const ReplaySpec& spec);
[[nodiscard]] std::vector<TrialOutcome> replay_hc(const Maze& maze, const HcParams& params, const ReplaySpec& spec);

/// Expected EP of an agent that picks uniformly random actions, estimated
/// from `episodes_per_goal` episodes for each of the eight goals.
[[nodiscard]] double random_policy_baseline(const Maze& maze, int episodes_per_goal, std::uint64_t seed);

struct Comparison {
    Summary dsp;
    Summary hc;
    double p_value = 1.0;
};

[[nodiscard]] Comparison compare_outcomes(const std::vector<TrialOutcome>& dsp, const std::vector<TrialOutcome>& hc);

// CSV tables, header row first, '\n' line endings.

/// trial,goal,best_ep,goal_reached
[[nodiscard]] std::string trials_csv(const std::vector<TrialOutcome>& outcomes);
/// trial,goal,episode,ep,best_ep,goal_reached
[[nodiscard]] std::string episodes_csv(const std::vector<TrialOutcome>& outcomes);
/// episode,mean_ep,mean_best_ep,reach_fraction (fraction of trials whose best
/// episode so far reached the goal)
[[nodiscard]] std::string curve_csv(const std::vector<TrialOutcome>& outcomes);
/// label,n,mean_best_ep,std_best_ep,reach_fraction
[[nodiscard]] std::string summary_csv(const std::vector<std::pair<std::string, Summary>>& rows);

/// Parses a trials table back (columns trial,goal,best_ep,goal_reached).
[[nodiscard]] std::vector<TrialOutcome> parse_trials_csv(std::string_view text);

} // namespace dsp
