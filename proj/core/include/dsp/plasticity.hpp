#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsp/maze.hpp"
#include "dsp/random.hpp"
#include "dsp/rnn.hpp"
#include "dsp/trial.hpp"

namespace dsp {

inline constexpr int kRuleSize = 32;

enum class ModSignal : std::int8_t { Punish = -1, Reward = 1 };

/// Index of a (pre, post) activation pair into the NAT: 00, 01, 10, 11.
[[nodiscard]] constexpr std::size_t nat_state(bool pre, bool post) noexcept {
    return (pre ? 2U : 0U) | (post ? 1U : 0U);
}

/// Neuron activation trace of one synapse.
struct Nat {
    std::array<std::uint32_t, 4> counts{};
    std::array<double, 4> freq{};
};

/// One NAT per synapse, laid out like RnnWeights::synapses().
class NatStore {
public:
    explicit NatStore(RnnDims dims = {});

    void reset() noexcept;
    void record(std::size_t synapse, bool pre, bool post) noexcept { ++nats_[synapse].counts[nat_state(pre, post)]; }

    /// Records one network step. Feed-forward synapses pair the activations of
    /// the same step (bias pre-activation is 1); recurrent and feedback
    /// synapses pair the previous-step presynaptic value with the new
    /// postsynaptic value, the same pair the forward pass multiplies.
    void record_step(const RnnWeights& layout, SensorReading input, const RnnState& prev, const RnnState& next) noexcept;

    /// Converts counts to frequencies. Throws std::invalid_argument when steps
    /// is zero or differs from the number of recorded steps.
    void finalize(int steps);

    [[nodiscard]] int recorded_steps() const noexcept { return steps_; }
    [[nodiscard]] bool finalized() const noexcept { return finalized_; }
    [[nodiscard]] std::size_t size() const noexcept { return nats_.size(); }
    [[nodiscard]] const Nat& operator[](std::size_t synapse) const noexcept { return nats_[synapse]; }

private:
    RnnDims dims_;
    std::vector<Nat> nats_;
    int steps_ = 0;
    bool finalized_ = false;
};

/// Binary NAT ordered (00, 01, 10, 11).
using NatPattern = std::array<bool, 4>;

/// bit s set iff freq[s] > theta (equality gives 0).
[[nodiscard]] NatPattern binarize(const std::array<double, 4>& freq, double theta) noexcept;

/// Row of the rule table: the pattern bits are a binary counter with 00 as the
/// most significant slot and m (Punish=0, Reward=1) as the least significant.
[[nodiscard]] constexpr int rule_index(const NatPattern& p, ModSignal m) noexcept {
    return (p[0] ? 16 : 0) + (p[1] ? 8 : 0) + (p[2] ? 4 : 0) + (p[3] ? 2 : 0) + (m == ModSignal::Reward ? 1 : 0);
}

struct DspRule {
    std::array<std::int8_t, kRuleSize> delta{};
    double eta = 0.0;
    double theta = 0.0;
    double alpha_h = 0.0;
    double alpha_o = 0.0;

    [[nodiscard]] RnnHyper hyper() const noexcept { return {alpha_h, alpha_o}; }
    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
    friend bool operator==(const DspRule&, const DspRule&) = default;
};

[[nodiscard]] int dsp_delta(const DspRule& rule, const Nat& nat, ModSignal m) noexcept;

/// Reward iff ep_now <= ep_prev (ep_prev may be +inf).
[[nodiscard]] constexpr ModSignal modulatory_signal(double ep_now, double ep_prev) noexcept {
    return ep_now <= ep_prev ? ModSignal::Reward : ModSignal::Punish;
}

/// Scales every neuron's concatenated incoming weight vector to unit length.
/// Neurons whose vector is exactly zero are left alone; returns their count.
int normalize_incoming(RnnWeights& weights);

struct UpdateStats {
    int skipped_neurons = 0;
};

/// w += eta * delta for every synapse, then normalize_incoming.
UpdateStats apply_update(RnnWeights& weights, const NatStore& store, const DspRule& rule, ModSignal m);

/// Runs one episode with NAT recording; store is reset first and contains the
/// raw counts of this episode on return (not finalized).
[[nodiscard]] EpisodeTrace run_recorded_episode(const Maze& maze, GoalConfig goal, const RnnWeights& weights,
                                                const RnnHyper& hyper, NatStore& store);

/// Uniform [-1, 1] weights followed by one normalisation pass.
[[nodiscard]] RnnWeights init_plastic_weights(Rng& rng, RnnDims dims = {});

/// The DSP learning loop: weights are only changed between episodes, by the
/// rule, from the episode's NATs and the reward/punishment signal.
[[nodiscard]] TrialResult dsp_trial(const Maze& maze, GoalConfig goal, const DspRule& rule, const TrialOptions& options,
                                    Rng& rng);

} // namespace dsp
