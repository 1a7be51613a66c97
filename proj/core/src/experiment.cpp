#include "dsp/experiment.hpp"

#include <stdexcept>

#include "dsp/format.hpp"
#include "dsp/random.hpp"

namespace dsp {

std::vector<TrialOutcome> replay_dsp(const Maze& maze, const DspRule& rule, const ReplaySpec& spec) {
    rule.validate();
    const TrialOptions options{spec.episodes, spec.resample_every, {}};
    return run_trial_grid(
        spec.grid, stream(spec.seed, Domain::Replay),
        [&](GoalConfig goal, Rng& rng) { return dsp_trial(maze, goal, rule, options, rng); }, spec.threads);
}

std::vector<TrialOutcome> replay_hc(const Maze& maze, const HcParams& params, const ReplaySpec& spec) {
    params.validate();
    const TrialOptions options{spec.episodes, spec.resample_every, {}};
    return run_trial_grid(
        spec.grid, stream(spec.seed, Domain::ReplayHc),
        [&](GoalConfig goal, Rng& rng) { return hc_trial(maze, goal, params, options, rng); }, spec.threads);
}

double random_policy_baseline(const Maze& maze, int episodes_per_goal, std::uint64_t seed) {
    if (episodes_per_goal < 1) throw std::invalid_argument("baseline needs at least one episode per goal");
    double total = 0.0;
    for (int g = 1; g <= kFinalCount; ++g) {
        const GoalConfig goal(g);
        Rng rng = stream(seed, Domain::Baseline).derive(static_cast<std::uint64_t>(g)).rng();
        std::uniform_int_distribution<int> pick(0, 3);
        for (int e = 0; e < episodes_per_goal; ++e) {
            const auto trace = run_episode(maze, goal, [&](const Pose&, const SensorReading&) {
                return static_cast<Action>(pick(rng));
            });
            total += episodic_performance(trace, maze, goal);
        }
    }
    return total / (static_cast<double>(episodes_per_goal) * kFinalCount);
}

Comparison compare_outcomes(const std::vector<TrialOutcome>& dsp, const std::vector<TrialOutcome>& hc) {
    Comparison c;
    c.dsp = summarize(dsp);
    c.hc = summarize(hc);
    c.p_value = wilcoxon_rank_sum(best_eps(dsp), best_eps(hc));
    return c;
}

std::string trials_csv(const std::vector<TrialOutcome>& outcomes) {
    std::string s = "trial,goal,best_ep,goal_reached\n";
    for (const auto& o : outcomes)
        s += std::to_string(o.trial) + ',' + std::to_string(o.goal) + ',' + format_double(o.result.best_ep) + ',' +
             (o.result.best_reached ? "1" : "0") + '\n';
    return s;
}

std::string episodes_csv(const std::vector<TrialOutcome>& outcomes) {
    std::string s = "trial,goal,episode,ep,best_ep,goal_reached\n";
    for (const auto& o : outcomes) {
        const std::string prefix = std::to_string(o.trial) + ',' + std::to_string(o.goal) + ',';
        int e = 0;
        for (const auto& rec : o.result.episodes)
            s += prefix + std::to_string(++e) + ',' + format_double(rec.ep) + ',' + format_double(rec.best_ep) + ',' +
                 (rec.goal_reached ? "1" : "0") + '\n';
    }
    return s;
}

std::string curve_csv(const std::vector<TrialOutcome>& outcomes) {
    std::string s = "episode,mean_ep,mean_best_ep,reach_fraction\n";
    if (outcomes.empty()) return s;
    const std::size_t episodes = outcomes.front().result.episodes.size();
    const auto n = static_cast<double>(outcomes.size());
    std::vector<bool> reached(outcomes.size(), false);
    std::vector<double> best(outcomes.size(), 0.0);
    for (std::size_t e = 0; e < episodes; ++e) {
        double ep = 0.0, best_ep = 0.0, hits = 0.0;
        for (std::size_t t = 0; t < outcomes.size(); ++t) {
            const auto& rec = outcomes[t].result.episodes.at(e);
            if (e == 0 || rec.ep < best[t]) {
                best[t] = rec.ep;
                reached[t] = rec.goal_reached;
            }
            ep += rec.ep;
            best_ep += rec.best_ep;
            hits += reached[t] ? 1.0 : 0.0;
        }
        s += std::to_string(e + 1) + ',' + format_double(ep / n) + ',' + format_double(best_ep / n) + ',' +
             format_double(hits / n) + '\n';
    }
    return s;
}

std::string summary_csv(const std::vector<std::pair<std::string, Summary>>& rows) {
    std::string s = "label,n,mean_best_ep,std_best_ep,reach_fraction\n";
    for (const auto& [label, sum] : rows)
        s += label + ',' + std::to_string(sum.n) + ',' + format_double(sum.mean) + ',' + format_double(sum.std) + ',' +
             format_double(sum.reach_fraction) + '\n';
    return s;
}

std::vector<TrialOutcome> parse_trials_csv(std::string_view text) {
    std::vector<TrialOutcome> out;
    bool header = true;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (line.empty()) continue;
        if (header) {
            if (line != "trial,goal,best_ep,goal_reached")
                throw std::invalid_argument("trials table: unexpected header '" + std::string(line) + "'");
            header = false;
            continue;
        }
        std::vector<std::string_view> f;
        for (;;) {
            const auto c = line.find(',');
            f.push_back(line.substr(0, c));
            if (c == std::string_view::npos) break;
            line.remove_prefix(c + 1);
        }
        if (f.size() != 4) throw std::invalid_argument("trials table: line " + std::to_string(line_no) + " needs 4 fields");
        TrialOutcome o;
        o.trial = static_cast<int>(parse_integer(f[0]));
        o.goal = static_cast<int>(parse_integer(f[1]));
        o.result.best_ep = parse_double(f[2]);
        o.result.best_reached = parse_integer(f[3]) != 0;
        out.push_back(std::move(o));
    }
    if (header) throw std::invalid_argument("trials table: missing header");
    return out;
}

} // namespace dsp
