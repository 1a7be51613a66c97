#include "dsp/rnn.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dsp/format.hpp"

namespace dsp {

RnnWeights::RnnWeights(RnnDims dims) : dims_(dims), w_(dims.synapse_count(), 0.0) {
    if (dims.inputs < 1 || dims.hidden < 1 || dims.outputs < 1) throw std::invalid_argument("invalid network dimensions");
}

std::vector<std::vector<std::size_t>> incoming_groups(const RnnDims& dims) {
    const RnnWeights layout(dims);
    std::vector<std::vector<std::size_t>> groups;
    groups.reserve(dims.neuron_count());
    for (int h = 0; h < dims.hidden; ++h) {
        auto& g = groups.emplace_back();
        for (int c = 0; c <= dims.inputs; ++c) g.push_back(layout.in_to_hidden_index(h, c));
        for (int p = 0; p < dims.hidden; ++p)
            if (p != h) g.push_back(layout.hidden_to_hidden_index(h, p));
        for (int o = 0; o < dims.outputs; ++o) g.push_back(layout.out_to_hidden_index(h, o));
    }
    for (int o = 0; o < dims.outputs; ++o) {
        auto& g = groups.emplace_back();
        for (int c = 0; c <= dims.hidden; ++c) g.push_back(layout.hidden_to_out_index(o, c));
    }
    return groups;
}

RnnState RnnState::zero(const RnnDims& dims) {
    return {std::vector<std::uint8_t>(static_cast<std::size_t>(dims.hidden), 0),
            std::vector<std::uint8_t>(static_cast<std::size_t>(dims.outputs), 0),
            std::vector<double>(static_cast<std::size_t>(dims.outputs), 0.0)};
}

RnnWeights init_weights(Rng& rng, RnnDims dims) {
    RnnWeights w(dims);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : w.synapses()) v = u(rng);
    return w;
}

void forward_into(const RnnWeights& weights, const RnnHyper& hyper, const RnnState& prev, SensorReading input,
                  RnnState& next) {
    const RnnDims& d = weights.dims();
    const std::span<const double> w = weights.synapses();
    next.hidden.resize(static_cast<std::size_t>(d.hidden));
    next.output.resize(static_cast<std::size_t>(d.outputs));
    next.output_pre.resize(static_cast<std::size_t>(d.outputs));

    const std::uint8_t in[3] = {input.left, input.front, input.right};
    for (int h = 0; h < d.hidden; ++h) {
        const std::size_t base = weights.in_to_hidden_index(h, 0);
        double feed = w[base];
        for (int c = 0; c < d.inputs; ++c)
            if (c < 3 && in[c]) feed += w[base + static_cast<std::size_t>(c) + 1];

        double recurrent = 0.0;
        for (int p = 0; p < d.hidden; ++p)
            if (p != h && prev.hidden[static_cast<std::size_t>(p)]) recurrent += w[weights.hidden_to_hidden_index(h, p)];

        double feedback = 0.0;
        for (int o = 0; o < d.outputs; ++o)
            if (prev.output[static_cast<std::size_t>(o)]) feedback += w[weights.out_to_hidden_index(h, o)];

        const double pre = feed + hyper.alpha_h * recurrent + hyper.alpha_o * feedback;
        next.hidden[static_cast<std::size_t>(h)] = pre > 0.0 ? 1 : 0;
    }

    for (int o = 0; o < d.outputs; ++o) {
        const std::size_t base = weights.hidden_to_out_index(o, 0);
        double pre = w[base];
        for (int h = 0; h < d.hidden; ++h)
            if (next.hidden[static_cast<std::size_t>(h)]) pre += w[base + static_cast<std::size_t>(h) + 1];
        next.output_pre[static_cast<std::size_t>(o)] = pre;
        next.output[static_cast<std::size_t>(o)] = pre > 0.0 ? 1 : 0;
    }
}

RnnState forward(const RnnWeights& weights, const RnnHyper& hyper, const RnnState& state, SensorReading input) {
    RnnState next;
    forward_into(weights, hyper, state, input, next);
    return next;
}

Action decode_action(const RnnState& state) noexcept {
    std::size_t best = 0;
    double best_pre = 0.0;
    bool any = false;
    for (std::size_t o = 0; o < state.output_pre.size() && o < 4; ++o) {
        if (state.output_pre[o] > 0.0 && (!any || state.output_pre[o] > best_pre)) {
            best = o;
            best_pre = state.output_pre[o];
            any = true;
        }
    }
    return any ? static_cast<Action>(best) : Action::Stop;
}

std::vector<double> flatten(const RnnWeights& weights) {
    const auto s = weights.synapses();
    return {s.begin(), s.end()};
}

RnnWeights unflatten(std::span<const double> values, RnnDims dims) {
    RnnWeights w(dims);
    if (values.size() != dims.synapse_count())
        throw std::invalid_argument("expected " + std::to_string(dims.synapse_count()) + " weights, got " +
                                    std::to_string(values.size()));
    std::copy(values.begin(), values.end(), w.synapses().begin());
    return w;
}

void write_weight_snapshot(std::ostream& out, const RnnWeights& weights) {
    const auto& d = weights.dims();
    out << "dims=" << d.inputs << ',' << d.hidden << ',' << d.outputs << '\n';
    for (double v : weights.synapses()) out << format_double(v) << '\n';
}

RnnWeights read_weight_snapshot(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("dims=", 0) != 0)
        throw std::invalid_argument("weight snapshot: missing dims header");
    RnnDims dims;
    {
        const std::string body = line.substr(5);
        const auto c1 = body.find(',');
        const auto c2 = body.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("weight snapshot: malformed dims header");
        dims.inputs = static_cast<int>(parse_integer(body.substr(0, c1)));
        dims.hidden = static_cast<int>(parse_integer(body.substr(c1 + 1, c2 - c1 - 1)));
        dims.outputs = static_cast<int>(parse_integer(body.substr(c2 + 1)));
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const double v = parse_double(line);
        if (!std::isfinite(v)) throw std::invalid_argument("weight snapshot: non-finite weight");
        values.push_back(v);
    }
    return unflatten(values, dims);
}

} // namespace dsp
