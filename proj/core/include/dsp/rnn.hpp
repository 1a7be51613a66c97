#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dsp/maze.hpp"
#include "dsp/random.hpp"

namespace dsp {

struct RnnDims {
    int inputs = 3;
    int hidden = 20;
    int outputs = 4;

    [[nodiscard]] constexpr std::size_t in_to_hidden_count() const noexcept {
        return static_cast<std::size_t>((inputs + 1) * hidden);
    }
    [[nodiscard]] constexpr std::size_t hidden_to_hidden_count() const noexcept {
        return static_cast<std::size_t>(hidden * (hidden - 1));
    }
    [[nodiscard]] constexpr std::size_t hidden_to_out_count() const noexcept {
        return static_cast<std::size_t>((hidden + 1) * outputs);
    }
    [[nodiscard]] constexpr std::size_t out_to_hidden_count() const noexcept {
        return static_cast<std::size_t>(outputs * hidden);
    }
    [[nodiscard]] constexpr std::size_t synapse_count() const noexcept {
        return in_to_hidden_count() + hidden_to_hidden_count() + hidden_to_out_count() + out_to_hidden_count();
    }
    [[nodiscard]] constexpr std::size_t neuron_count() const noexcept {
        return static_cast<std::size_t>(hidden + outputs);
    }
    friend constexpr bool operator==(const RnnDims&, const RnnDims&) noexcept = default;
};

static_assert(RnnDims{}.synapse_count() == 624);

struct RnnHyper {
    double alpha_h = 0.0;
    double alpha_o = 0.0;
};

/// All synapses of the network in one flat array. Blocks, in order:
///   in->hidden   hidden x (inputs+1), column 0 is the bias
///   hidden->hidden  hidden x (hidden-1), the self connection is not stored
///   hidden->out  outputs x (hidden+1), column 0 is the bias
///   out->hidden  hidden x outputs
/// Each block is row-major with one row per post-synaptic neuron. This is
/// also the flatten order and the NAT layout.
class RnnWeights {
public:
    explicit RnnWeights(RnnDims dims = {});

    [[nodiscard]] const RnnDims& dims() const noexcept { return dims_; }

    [[nodiscard]] std::size_t in_to_hidden_index(int post, int column) const noexcept {
        return static_cast<std::size_t>(post * (dims_.inputs + 1) + column);
    }
    /// pre must differ from post.
    [[nodiscard]] std::size_t hidden_to_hidden_index(int post, int pre) const noexcept {
        return dims_.in_to_hidden_count() +
               static_cast<std::size_t>(post * (dims_.hidden - 1) + (pre < post ? pre : pre - 1));
    }
    [[nodiscard]] std::size_t hidden_to_out_index(int post, int column) const noexcept {
        return dims_.in_to_hidden_count() + dims_.hidden_to_hidden_count() +
               static_cast<std::size_t>(post * (dims_.hidden + 1) + column);
    }
    [[nodiscard]] std::size_t out_to_hidden_index(int post, int pre) const noexcept {
        return dims_.in_to_hidden_count() + dims_.hidden_to_hidden_count() + dims_.hidden_to_out_count() +
               static_cast<std::size_t>(post * dims_.outputs + pre);
    }

    double& in_to_hidden(int post, int column) noexcept { return w_[in_to_hidden_index(post, column)]; }
    double& hidden_to_hidden(int post, int pre) noexcept { return w_[hidden_to_hidden_index(post, pre)]; }
    double& hidden_to_out(int post, int column) noexcept { return w_[hidden_to_out_index(post, column)]; }
    double& out_to_hidden(int post, int pre) noexcept { return w_[out_to_hidden_index(post, pre)]; }

    [[nodiscard]] double in_to_hidden(int post, int column) const noexcept { return w_[in_to_hidden_index(post, column)]; }
    /// Zero on the diagonal.
    [[nodiscard]] double hidden_to_hidden(int post, int pre) const noexcept {
        return pre == post ? 0.0 : w_[hidden_to_hidden_index(post, pre)];
    }
    [[nodiscard]] double hidden_to_out(int post, int column) const noexcept { return w_[hidden_to_out_index(post, column)]; }
    [[nodiscard]] double out_to_hidden(int post, int pre) const noexcept { return w_[out_to_hidden_index(post, pre)]; }

    [[nodiscard]] std::span<double> synapses() noexcept { return w_; }
    [[nodiscard]] std::span<const double> synapses() const noexcept { return w_; }

    friend bool operator==(const RnnWeights&, const RnnWeights&) = default;

private:
    RnnDims dims_;
    std::vector<double> w_;
};

/// Synapse indices of every incoming connection of one neuron, bias included.
/// Hidden neurons come first (in->hidden, hidden->hidden, out->hidden rows),
/// then output neurons (their hidden->out row).
[[nodiscard]] std::vector<std::vector<std::size_t>> incoming_groups(const RnnDims& dims);

struct RnnState {
    std::vector<std::uint8_t> hidden;
    std::vector<std::uint8_t> output;
    std::vector<double> output_pre;

    [[nodiscard]] static RnnState zero(const RnnDims& dims);
    friend bool operator==(const RnnState&, const RnnState&) = default;
};

[[nodiscard]] RnnWeights init_weights(Rng& rng, RnnDims dims = {});

/// One network step; writes the new state into next (which must not alias prev).
void forward_into(const RnnWeights& weights, const RnnHyper& hyper, const RnnState& prev, SensorReading input,
                  RnnState& next);
[[nodiscard]] RnnState forward(const RnnWeights& weights, const RnnHyper& hyper, const RnnState& state,
                               SensorReading input);

/// Argmax of the output pre-activations; ties go to the earliest of
/// Stop, Left, Right, Straight; no positive pre-activation means Stop.
[[nodiscard]] Action decode_action(const RnnState& state) noexcept;

[[nodiscard]] std::vector<double> flatten(const RnnWeights& weights);
[[nodiscard]] RnnWeights unflatten(std::span<const double> values, RnnDims dims = {});

void write_weight_snapshot(std::ostream& out, const RnnWeights& weights);
[[nodiscard]] RnnWeights read_weight_snapshot(std::istream& in);

} // namespace dsp
