#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dsp/maze.hpp"
#include "dsp/random.hpp"
#include "dsp/rnn.hpp"

namespace dsp {

struct EpisodeRecord {
    double ep = 0.0;
    double best_ep = 0.0;
    bool goal_reached = false;
};

/// Outcome of one learning run (fresh weights, N episodes, one goal).
struct TrialResult {
    std::vector<EpisodeRecord> episodes;
    double best_ep = 0.0;
    /// goal_reached flag of the first episode that achieved best_ep
    bool best_reached = false;
    /// DSP: weights after the last update. HC: the incumbent.
    RnnWeights final_weights;
};

/// Called once per episode with the 1-based episode number and the network
/// that was evaluated in it.
using EpisodeObserver = std::function<void(int, const RnnWeights&)>;

struct TrialOptions {
    int episodes = 100;
    /// Re-initialise the weights every this many episodes (best EP is kept).
    std::optional<int> resample_every;
    EpisodeObserver observer;
};

/// Plain controller run without plasticity; returns the episode trace.
[[nodiscard]] EpisodeTrace run_network_episode(const Maze& maze, GoalConfig goal, const RnnWeights& weights,
                                               const RnnHyper& hyper);

/// Running best-EP bookkeeping shared by the DSP and HC loops.
class BestTracker {
public:
    void add(TrialResult& result, double ep, bool reached);

private:
    bool any_ = false;
};

/// Grid of independent trials: trials_per_goal repetitions for each of the
/// first `goals` goal indices.
struct TrialGrid {
    int trials_per_goal = 5;
    int goals = kFinalCount;
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(trials_per_goal) * static_cast<std::size_t>(goals);
    }
};

struct TrialOutcome {
    int trial = 0;  // 0-based repetition
    int goal = 1;   // 1..8
    TrialResult result;
};

using TrialFn = std::function<TrialResult(GoalConfig, Rng&)>;

/// Runs every (trial, goal) cell; cell (t, g) draws from seed.derive({t, g}).
/// Output order is trial-major and independent of the thread count.
[[nodiscard]] std::vector<TrialOutcome> run_trial_grid(const TrialGrid& grid, StreamSeed seed, const TrialFn& fn,
                                                     int threads = 1);

/// Mean of best_ep over outcomes.
[[nodiscard]] double mean_best_ep(const std::vector<TrialOutcome>& outcomes);

} // namespace dsp
