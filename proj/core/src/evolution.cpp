#include "dsp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dsp/parallel.hpp"

namespace dsp {

namespace {

constexpr std::size_t kDspContinuous = 4;
constexpr std::size_t kHcContinuous = 3;

std::size_t discrete_slots(GenotypeKind k) { return k == GenotypeKind::Dsp ? kRuleSize : 0; }
std::size_t continuous_slots(GenotypeKind k) { return k == GenotypeKind::Dsp ? kDspContinuous : kHcContinuous; }

} // namespace

bool Genotype::has_kind(GenotypeKind kind) const noexcept {
    return discrete.size() == discrete_slots(kind) && continuous.size() == continuous_slots(kind);
}

void Genotype::validate(GenotypeKind kind) const {
    if (!has_kind(kind)) throw std::invalid_argument("genotype shape mismatch");
    for (auto d : discrete)
        if (d < -1 || d > 1) throw std::invalid_argument("discrete gene outside {-1,0,1}");
    for (auto c : continuous)
        if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("continuous gene outside [0,1]");
}

Genotype random_genotype(GenotypeKind kind, Rng& rng) {
    std::uniform_int_distribution<int> tri(-1, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Genotype g;
    g.discrete.resize(discrete_slots(kind));
    for (auto& d : g.discrete) d = static_cast<std::int8_t>(tri(rng));
    g.continuous.resize(continuous_slots(kind));
    for (auto& c : g.continuous) c = unit(rng);
    return g;
}

Genotype genotype_from(const DspRule& rule) {
    return {{rule.delta.begin(), rule.delta.end()}, {rule.eta, rule.theta, rule.alpha_h, rule.alpha_o}};
}

Genotype genotype_from(const HcParams& p) { return {{}, {p.sigma, p.alpha_h, p.alpha_o}}; }

DspRule to_rule(const Genotype& g) {
    g.validate(GenotypeKind::Dsp);
    DspRule r;
    std::copy(g.discrete.begin(), g.discrete.end(), r.delta.begin());
    r.eta = g.continuous[0];
    r.theta = g.continuous[1];
    r.alpha_h = g.continuous[2];
    r.alpha_o = g.continuous[3];
    return r;
}

HcParams to_hc_params(const Genotype& g) {
    g.validate(GenotypeKind::Hc);
    return {g.continuous[0], g.continuous[1], g.continuous[2]};
}

void GaConfig::validate() const {
    if (pop_size < 1) throw std::invalid_argument("pop_size must be >= 1");
    if (elites < 0 || elites >= pop_size) throw std::invalid_argument("elites must be in [0, pop_size)");
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    for (double p : {crossover_prob, discrete_mutation_prob})
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probabilities must be in [0,1]");
    if (!(continuous_mutation_sigma >= 0.0)) throw std::invalid_argument("mutation sigma must be >= 0");
}

double evaluate_dsp(const Genotype& g, const Maze& maze, const EvalConfig& config, StreamSeed seed) {
    const DspRule rule = to_rule(g);
    const TrialOptions options{config.episodes, config.resample_every, {}};
    const auto outcomes = run_trial_grid(config.grid, seed, [&](GoalConfig goal, Rng& rng) {
        return dsp_trial(maze, goal, rule, options, rng);
    });
    return mean_best_ep(outcomes);
}

double evaluate_hc(const Genotype& g, const Maze& maze, const EvalConfig& config, StreamSeed seed) {
    const HcParams params = to_hc_params(g);
    const TrialOptions options{config.episodes, config.resample_every, {}};
    const auto outcomes = run_trial_grid(config.grid, seed, [&](GoalConfig goal, Rng& rng) {
        return hc_trial(maze, goal, params, options, rng);
    });
    return mean_best_ep(outcomes);
}

std::vector<double> selection_weights(std::span<const double> fitnesses) {
    if (fitnesses.empty()) throw std::invalid_argument("selection over an empty population");
    for (double f : fitnesses)
        if (!std::isfinite(f)) throw std::invalid_argument("selection requires finite fitnesses");
    const auto [lo, hi] = std::minmax_element(fitnesses.begin(), fitnesses.end());
    if (*lo == *hi) return std::vector<double>(fitnesses.size(), 1.0);
    const double max_f = *hi;
    const double eps = 1e-6 * std::abs(max_f);
    std::vector<double> w;
    w.reserve(fitnesses.size());
    for (double f : fitnesses) w.push_back((max_f - f) + eps);
    return w;
}

std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng) {
    const auto w = selection_weights(fitnesses);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::uniform_real_distribution<double> u(0.0, total);
    const double r = u(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        if (r < acc) return i;
    }
    // r == total within rounding; pick the last individual with nonzero weight
    for (std::size_t i = w.size(); i-- > 0;)
        if (w[i] > 0.0) return i;
    return w.size() - 1;
}

Genotype crossover_at(const Genotype& a, const Genotype& b, std::size_t cut) {
    if (a.discrete.size() != b.discrete.size() || a.continuous.size() != b.continuous.size())
        throw std::invalid_argument("crossover: genotype shape mismatch");
    if (cut < 1 || cut >= a.size()) throw std::out_of_range("crossover: cut point out of range");
    Genotype child = a;
    for (std::size_t i = cut; i < a.size(); ++i) {
        if (i < a.discrete.size())
            child.discrete[i] = b.discrete[i];
        else
            child.continuous[i - a.discrete.size()] = b.continuous[i - a.discrete.size()];
    }
    return child;
}

Genotype crossover_1pt(const Genotype& a, const Genotype& b, double prob, Rng& rng) {
    if (a.discrete.size() != b.discrete.size() || a.continuous.size() != b.continuous.size())
        throw std::invalid_argument("crossover: genotype shape mismatch");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (a.size() < 2 || !(u(rng) < prob)) return a;
    std::uniform_int_distribution<std::size_t> cut(1, a.size() - 1);
    return crossover_at(a, b, cut(rng));
}

Genotype mutate(const Genotype& g, double discrete_prob, double sigma, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> tri(-1, 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    Genotype out = g;
    for (auto& d : out.discrete)
        if (u(rng) < discrete_prob) d = static_cast<std::int8_t>(tri(rng));
    for (auto& c : out.continuous) c = std::clamp(c + sigma * noise(rng), 0.0, 1.0);
    return out;
}

EvolutionResult evolve(const GaConfig& config, GenotypeKind kind, const Evaluator& evaluator,
                       std::uint64_t master_seed, int threads, const GenerationObserver& observer) {
    config.validate();
    const auto pop = static_cast<std::size_t>(config.pop_size);
    const StreamSeed eval_seed = stream(master_seed, Domain::Evaluation);

    std::vector<Genotype> population;
    population.reserve(pop);
    {
        Rng init = stream(master_seed, Domain::GaInit).rng();
        for (std::size_t i = 0; i < pop; ++i) population.push_back(random_genotype(kind, init));
    }
    std::vector<double> fitness(pop, 0.0);
    std::vector<bool> evaluated(pop, false);

    EvolutionResult result;
    bool have_best = false;

    for (int gen = 0; gen < config.generations; ++gen) {
        parallel_for(pop, threads, [&](std::size_t i) {
            if (evaluated[i]) return;
            fitness[i] = evaluator(population[i],
                                   eval_seed.derive({static_cast<std::uint64_t>(gen), static_cast<std::uint64_t>(i)}));
        });
        std::fill(evaluated.begin(), evaluated.end(), true);
        if (observer) observer(gen, population, fitness);

        const auto best_it = std::min_element(fitness.begin(), fitness.end());
        const auto best_i = static_cast<std::size_t>(best_it - fitness.begin());
        const double mean = std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(pop);
        if (!have_best || *best_it < result.best_fitness) {
            result.best = population[best_i];
            result.best_fitness = *best_it;
            have_best = true;
        }
        result.history.push_back({gen, *best_it, mean, population[best_i]});

        if (gen + 1 == config.generations) break;

        // stable order: ties keep the lower slot first
        std::vector<std::size_t> order(pop);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fitness[a] < fitness[b]; });

        Rng ops = stream(master_seed, Domain::GaOperators).derive(static_cast<std::uint64_t>(gen)).rng();
        std::vector<Genotype> next;
        std::vector<double> next_fitness;
        next.reserve(pop);
        for (std::size_t e = 0; e < static_cast<std::size_t>(config.elites); ++e) {
            next.push_back(population[order[e]]);
            next_fitness.push_back(fitness[order[e]]);
        }
        while (next.size() < pop) {
            const Genotype& a = population[roulette_select(fitness, ops)];
            const Genotype& b = population[roulette_select(fitness, ops)];
            Genotype child = crossover_1pt(a, b, config.crossover_prob, ops);
            next.push_back(mutate(child, config.discrete_mutation_prob, config.continuous_mutation_sigma, ops));
            next_fitness.push_back(0.0);
        }
        population = std::move(next);
        fitness = std::move(next_fitness);
        std::fill(evaluated.begin(), evaluated.end(), false);
        std::fill(evaluated.begin(), evaluated.begin() + config.elites, true);
    }
    return result;
}

} // namespace dsp
