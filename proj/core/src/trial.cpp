#include "dsp/trial.hpp"

#include <stdexcept>

#include "dsp/parallel.hpp"

namespace dsp {

EpisodeTrace run_network_episode(const Maze& maze, GoalConfig goal, const RnnWeights& weights, const RnnHyper& hyper) {
    RnnState current = RnnState::zero(weights.dims());
    RnnState next = current;
    return run_episode(maze, goal, [&](const Pose&, const SensorReading& reading) {
        forward_into(weights, hyper, current, reading, next);
        std::swap(current, next);
        return decode_action(current);
    });
}

void BestTracker::add(TrialResult& result, double ep, bool reached) {
    if (!any_ || ep < result.best_ep) {
        result.best_ep = ep;
        result.best_reached = reached;
        any_ = true;
    }
    result.episodes.push_back({ep, result.best_ep, reached});
}

std::vector<TrialOutcome> run_trial_grid(const TrialGrid& grid, StreamSeed seed, const TrialFn& fn, int threads) {
    if (grid.trials_per_goal < 1) throw std::invalid_argument("trials per goal must be >= 1");
    if (grid.goals < 1 || grid.goals > kFinalCount) throw std::invalid_argument("goal count must be in 1..8");
    std::vector<TrialOutcome> out(grid.size());
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const int t = static_cast<int>(i / static_cast<std::size_t>(grid.goals));
        const int g = static_cast<int>(i % static_cast<std::size_t>(grid.goals)) + 1;
        Rng rng = seed.derive({static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(g)}).rng();
        out[i] = {t, g, fn(GoalConfig(g), rng)};
    });
    return out;
}

double mean_best_ep(const std::vector<TrialOutcome>& outcomes) {
    if (outcomes.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& o : outcomes) sum += o.result.best_ep;
    return sum / static_cast<double>(outcomes.size());
}

} // namespace dsp
