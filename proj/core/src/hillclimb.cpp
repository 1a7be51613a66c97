#include "dsp/hillclimb.hpp"

#include <stdexcept>
#include <string>

namespace dsp {

void HcParams::validate() const {
    const auto check = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " outside [0,1]");
    };
    check(sigma, "sigma");
    check(alpha_h, "alpha_h");
    check(alpha_o, "alpha_o");
}

std::vector<double> perturb(std::span<const double> best, double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("perturb: sigma must be >= 0");
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> out(best.begin(), best.end());
    for (double& v : out) v += sigma * z(rng);
    return out;
}

TrialResult hc_trial(const Maze& maze, GoalConfig goal, const HcParams& params, const TrialOptions& options, Rng& rng) {
    if (options.episodes < 1) throw std::invalid_argument("hc_trial: episodes must be >= 1");
    if (options.resample_every && *options.resample_every < 1)
        throw std::invalid_argument("hc_trial: resample_every must be >= 1");

    const RnnHyper hyper = params.hyper();
    const RnnDims dims{};
    TrialResult result;
    result.episodes.reserve(static_cast<std::size_t>(options.episodes));
    BestTracker best;

    const auto evaluate = [&](int e, const RnnWeights& w) {
        if (options.observer) options.observer(e, w);
        const EpisodeTrace trace = run_network_episode(maze, goal, w, hyper);
        const double ep = episodic_performance(trace, maze, goal);
        best.add(result, ep, trace.goal_reached);
        return ep;
    };

    RnnWeights incumbent = init_weights(rng, dims);
    double incumbent_ep = evaluate(1, incumbent);

    for (int e = 2; e <= options.episodes; ++e) {
        if (options.resample_every && (e - 1) % *options.resample_every == 0) {
            incumbent = init_weights(rng, dims);
            incumbent_ep = evaluate(e, incumbent);
            continue;
        }
        RnnWeights candidate = unflatten(perturb(incumbent.synapses(), params.sigma, rng), dims);
        const double ep = evaluate(e, candidate);
        if (ep < incumbent_ep) {
            incumbent = std::move(candidate);
            incumbent_ep = ep;
        }
    }
    result.final_weights = std::move(incumbent);
    return result;
}

} // namespace dsp
