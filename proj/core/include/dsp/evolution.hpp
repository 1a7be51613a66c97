#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dsp/hillclimb.hpp"
#include "dsp/maze.hpp"
#include "dsp/plasticity.hpp"
#include "dsp/random.hpp"
#include "dsp/trial.hpp"

namespace dsp {

enum class GenotypeKind { Dsp, Hc };

/// Discrete slots first, then continuous ones. DSP: 32 deltas followed by
/// (eta, theta, alpha_h, alpha_o). HC: no deltas, (sigma, alpha_h, alpha_o).
struct Genotype {
    std::vector<std::int8_t> discrete;
    std::vector<double> continuous;

    [[nodiscard]] std::size_t size() const noexcept { return discrete.size() + continuous.size(); }
    [[nodiscard]] bool has_kind(GenotypeKind kind) const noexcept;
    /// Throws std::invalid_argument if shape or ranges are violated.
    void validate(GenotypeKind kind) const;
    friend bool operator==(const Genotype&, const Genotype&) = default;
};

[[nodiscard]] Genotype random_genotype(GenotypeKind kind, Rng& rng);
[[nodiscard]] Genotype genotype_from(const DspRule& rule);
[[nodiscard]] Genotype genotype_from(const HcParams& params);
[[nodiscard]] DspRule to_rule(const Genotype& g);
[[nodiscard]] HcParams to_hc_params(const Genotype& g);

struct GaConfig {
    int pop_size = 14;
    int elites = 4;
    double crossover_prob = 0.5;
    double discrete_mutation_prob = 0.15;
    double continuous_mutation_sigma = 0.1;
    int generations = 300;
    void validate() const;
};

struct EvalConfig {
    TrialGrid grid{5, kFinalCount};
    int episodes = 100;
    std::optional<int> resample_every;
};

/// Mean best EP over the trial grid, each trial a fresh random network
/// trained by the genotype's DSP rule. Cells draw from seed.derive({t, g}).
[[nodiscard]] double evaluate_dsp(const Genotype& g, const Maze& maze, const EvalConfig& config, StreamSeed seed);
/// Same trial structure with the hill climber as the inner loop.
[[nodiscard]] double evaluate_hc(const Genotype& g, const Maze& maze, const EvalConfig& config, StreamSeed seed);

/// Roulette weights for a minimised fitness: (max_f - f_i) + 1e-6 * max_f.
/// All-equal fitnesses give uniform weights.
[[nodiscard]] std::vector<double> selection_weights(std::span<const double> fitnesses);
[[nodiscard]] std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng);

/// Splice at cut (1..size-1): slots [0, cut) from a, the rest from b.
[[nodiscard]] Genotype crossover_at(const Genotype& a, const Genotype& b, std::size_t cut);
/// With probability prob, splice at a uniform cut in 1..size-1; otherwise a copy of a.
[[nodiscard]] Genotype crossover_1pt(const Genotype& a, const Genotype& b, double prob, Rng& rng);

/// Discrete slots re-drawn uniformly from {-1,0,1} with discrete_prob;
/// continuous slots get N(0, sigma^2) noise, clamped to [0,1].
[[nodiscard]] Genotype mutate(const Genotype& g, double discrete_prob, double sigma, Rng& rng);

using Evaluator = std::function<double(const Genotype&, StreamSeed)>;

struct GenerationRecord {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    Genotype best;
};

struct EvolutionResult {
    Genotype best;
    double best_fitness = 0.0;
    std::vector<GenerationRecord> history;
};

/// Hook for inspecting each evaluated generation (population, fitnesses).
using GenerationObserver = std::function<void(int, const std::vector<Genotype>&, const std::vector<double>&)>;

/// Generational GA with elitism. Elites keep their cached fitness; every
/// other individual of generation g, slot i, is evaluated with
/// master.derive({g, i}). Operators draw from a per-generation stream.
[[nodiscard]] EvolutionResult evolve(const GaConfig& config, GenotypeKind kind, const Evaluator& evaluator,
                                     std::uint64_t master_seed, int threads = 1,
                                     const GenerationObserver& observer = {});

} // namespace dsp
