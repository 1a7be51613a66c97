#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dsp/bundle.hpp"
#include "dsp/hillclimb.hpp"
#include "dsp/plasticity.hpp"
#include "dsp/stats.hpp"

using namespace dsp;

namespace {

const Maze& maze() {
    static const Maze m = load_maze(DSP_BENCH_DATA_DIR "/triple_t_maze.txt");
    return m;
}

const DspRule& rule1() {
    static const auto rules = load_rule_bundle(DSP_BENCH_DATA_DIR "/appendix_rules.csv");
    return find_rule(rules, 1);
}

void BM_Forward(benchmark::State& st) {
    Rng rng(1);
    const RnnWeights w = init_weights(rng);
    const RnnHyper hyper{0.4, 0.6};
    RnnState s = RnnState::zero(w.dims());
    int k = 0;
    for (auto _ : st) {
        s = forward(w, hyper, s, {static_cast<std::uint8_t>(k & 1), 0, static_cast<std::uint8_t>((k >> 1) & 1)});
        benchmark::DoNotOptimize(s);
        ++k;
    }
}
BENCHMARK(BM_Forward);

void BM_Episode(benchmark::State& st) {
    Rng rng(2);
    const RnnWeights w = init_weights(rng);
    for (auto _ : st) benchmark::DoNotOptimize(run_network_episode(maze(), GoalConfig(3), w, rule1().hyper()));
}
BENCHMARK(BM_Episode);

void BM_RecordedEpisodeAndUpdate(benchmark::State& st) {
    Rng rng(3);
    RnnWeights w = init_plastic_weights(rng);
    NatStore store(w.dims());
    for (auto _ : st) {
        const auto trace = run_recorded_episode(maze(), GoalConfig(5), w, rule1().hyper(), store);
        store.finalize(trace.steps_taken);
        benchmark::DoNotOptimize(apply_update(w, store, rule1(), ModSignal::Reward));
    }
}
BENCHMARK(BM_RecordedEpisodeAndUpdate);

void BM_HcTrial100(benchmark::State& st) {
    const HcParams p{0.5, 0.5, 0.5};
    for (auto _ : st) {
        Rng rng(4);
        benchmark::DoNotOptimize(hc_trial(maze(), GoalConfig(2), p, {100, std::nullopt, {}}, rng));
    }
}
BENCHMARK(BM_HcTrial100)->Unit(benchmark::kMillisecond);

void BM_Wilcoxon(benchmark::State& st) {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> v(40, 140);
    std::vector<double> a(static_cast<std::size_t>(st.range(0))), b(a.size());
    for (auto& x : a) x = v(gen);
    for (auto& x : b) x = v(gen);
    for (auto _ : st) benchmark::DoNotOptimize(wilcoxon_rank_sum(a, b));
}
BENCHMARK(BM_Wilcoxon)->Arg(10)->Arg(40)->Arg(400);

} // namespace

BENCHMARK_MAIN();
