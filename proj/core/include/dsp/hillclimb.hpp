#pragma once

#include <span>
#include <vector>

#include "dsp/maze.hpp"
#include "dsp/random.hpp"
#include "dsp/rnn.hpp"
#include "dsp/trial.hpp"

namespace dsp {

struct HcParams {
    double sigma = 0.0;
    double alpha_h = 0.0;
    double alpha_o = 0.0;

    [[nodiscard]] RnnHyper hyper() const noexcept { return {alpha_h, alpha_o}; }
    void validate() const;
    friend bool operator==(const HcParams&, const HcParams&) = default;
};

/// best + sigma * z with z ~ N(0, 1) per dimension.
[[nodiscard]] std::vector<double> perturb(std::span<const double> best, double sigma, Rng& rng);

/// Direct-encoding hill climber over the flattened weight vector. The
/// candidate replaces the incumbent only on a strictly smaller EP. With
/// resample_every set, the incumbent is replaced by a fresh random vector
/// at each period boundary; the reported best EP is kept across resets.
[[nodiscard]] TrialResult hc_trial(const Maze& maze, GoalConfig goal, const HcParams& params,
                                   const TrialOptions& options, Rng& rng);

} // namespace dsp
