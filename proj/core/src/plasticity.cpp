#include "dsp/plasticity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dsp {

NatStore::NatStore(RnnDims dims) : dims_(dims), nats_(dims.synapse_count()) {}

void NatStore::reset() noexcept {
    for (auto& n : nats_) n = Nat{};
    steps_ = 0;
    finalized_ = false;
}

void NatStore::record_step(const RnnWeights& layout, SensorReading input, const RnnState& prev,
                           const RnnState& next) noexcept {
    const RnnDims& d = dims_;
    const bool in[3] = {input.left != 0, input.front != 0, input.right != 0};
    for (int h = 0; h < d.hidden; ++h) {
        const bool post = next.hidden[static_cast<std::size_t>(h)] != 0;
        const std::size_t base = layout.in_to_hidden_index(h, 0);
        record(base, true, post);
        for (int c = 0; c < d.inputs; ++c) record(base + static_cast<std::size_t>(c) + 1, c < 3 && in[c], post);
        for (int p = 0; p < d.hidden; ++p)
            if (p != h) record(layout.hidden_to_hidden_index(h, p), prev.hidden[static_cast<std::size_t>(p)] != 0, post);
        for (int o = 0; o < d.outputs; ++o)
            record(layout.out_to_hidden_index(h, o), prev.output[static_cast<std::size_t>(o)] != 0, post);
    }
    for (int o = 0; o < d.outputs; ++o) {
        const bool post = next.output[static_cast<std::size_t>(o)] != 0;
        const std::size_t base = layout.hidden_to_out_index(o, 0);
        record(base, true, post);
        for (int h = 0; h < d.hidden; ++h)
            record(base + static_cast<std::size_t>(h) + 1, next.hidden[static_cast<std::size_t>(h)] != 0, post);
    }
    ++steps_;
}

void NatStore::finalize(int steps) {
    if (steps < 1) throw std::invalid_argument("NAT finalize: steps must be >= 1");
    if (steps != steps_)
        throw std::invalid_argument("NAT finalize: " + std::to_string(steps) + " steps given, " +
                                    std::to_string(steps_) + " recorded");
    const double inv = 1.0 / steps;
    for (auto& n : nats_)
        for (std::size_t s = 0; s < 4; ++s) n.freq[s] = n.counts[s] * inv;
    finalized_ = true;
}

NatPattern binarize(const std::array<double, 4>& freq, double theta) noexcept {
    return {freq[0] > theta, freq[1] > theta, freq[2] > theta, freq[3] > theta};
}

void DspRule::validate() const {
    for (std::size_t i = 0; i < delta.size(); ++i)
        if (delta[i] < -1 || delta[i] > 1)
            throw std::invalid_argument("delta " + std::to_string(i + 1) + " outside {-1,0,1}");
    const auto check = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " outside [0,1]");
    };
    check(eta, "eta");
    check(theta, "theta");
    check(alpha_h, "alpha_h");
    check(alpha_o, "alpha_o");
}

int dsp_delta(const DspRule& rule, const Nat& nat, ModSignal m) noexcept {
    return rule.delta[static_cast<std::size_t>(rule_index(binarize(nat.freq, rule.theta), m))];
}

int normalize_incoming(RnnWeights& weights) {
    // groups depend only on dims; cache the default layout
    static const auto default_groups = incoming_groups(RnnDims{});
    std::vector<std::vector<std::size_t>> custom;
    const auto* groups = &default_groups;
    if (weights.dims() != RnnDims{}) {
        custom = incoming_groups(weights.dims());
        groups = &custom;
    }
    auto w = weights.synapses();
    int skipped = 0;
    for (const auto& g : *groups) {
        double sq = 0.0;
        for (auto i : g) sq += w[i] * w[i];
        if (sq == 0.0) {
            ++skipped;
            continue;
        }
        const double inv = 1.0 / std::sqrt(sq);
        for (auto i : g) w[i] *= inv;
    }
    return skipped;
}

UpdateStats apply_update(RnnWeights& weights, const NatStore& store, const DspRule& rule, ModSignal m) {
    if (!store.finalized()) throw std::logic_error("apply_update: NAT store not finalized");
    if (store.size() != weights.synapses().size()) throw std::invalid_argument("apply_update: NAT layout mismatch");
    auto w = weights.synapses();
    if (rule.eta != 0.0)
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += rule.eta * dsp_delta(rule, store[i], m);
    return {normalize_incoming(weights)};
}

EpisodeTrace run_recorded_episode(const Maze& maze, GoalConfig goal, const RnnWeights& weights, const RnnHyper& hyper,
                                  NatStore& store) {
    store.reset();
    RnnState current = RnnState::zero(weights.dims());
    RnnState next = current;
    return run_episode(maze, goal, [&](const Pose&, const SensorReading& reading) {
        forward_into(weights, hyper, current, reading, next);
        store.record_step(weights, reading, current, next);
        std::swap(current, next);
        return decode_action(current);
    });
}

RnnWeights init_plastic_weights(Rng& rng, RnnDims dims) {
    RnnWeights w = init_weights(rng, dims);
    normalize_incoming(w);
    return w;
}

TrialResult dsp_trial(const Maze& maze, GoalConfig goal, const DspRule& rule, const TrialOptions& options, Rng& rng) {
    if (options.episodes < 1) throw std::invalid_argument("dsp_trial: episodes must be >= 1");
    if (options.resample_every && *options.resample_every < 1)
        throw std::invalid_argument("dsp_trial: resample_every must be >= 1");

    TrialResult result;
    result.episodes.reserve(static_cast<std::size_t>(options.episodes));
    BestTracker best;
    const RnnHyper hyper = rule.hyper();
    RnnWeights weights = init_plastic_weights(rng);
    NatStore store(weights.dims());
    double ep_prev = std::numeric_limits<double>::infinity();

    for (int e = 1; e <= options.episodes; ++e) {
        if (options.resample_every && e > 1 && (e - 1) % *options.resample_every == 0) {
            weights = init_plastic_weights(rng);
            ep_prev = std::numeric_limits<double>::infinity();
        }
        if (options.observer) options.observer(e, weights);

        const EpisodeTrace trace = run_recorded_episode(maze, goal, weights, hyper, store);
        const double ep = episodic_performance(trace, maze, goal);
        const ModSignal m = modulatory_signal(ep, ep_prev);
        best.add(result, ep, trace.goal_reached);
        store.finalize(trace.steps_taken);
        apply_update(weights, store, rule, m);
        ep_prev = ep;
    }
    result.final_weights = std::move(weights);
    return result;
}

} // namespace dsp
