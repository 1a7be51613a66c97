#include "dsp_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dsp/bundle.hpp"
#include "dsp/evolution.hpp"
#include "dsp/experiment.hpp"
#include "dsp/format.hpp"

#ifndef DSP_DEFAULT_DATA_DIR
#define DSP_DEFAULT_DATA_DIR "data"
#endif

namespace dsp::cli {

namespace fs = std::filesystem;

std::string data_dir() {
    if (const char* env = std::getenv("DSP_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return DSP_DEFAULT_DATA_DIR;
}

namespace {

struct Common {
    std::string maze;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = "results";
};

struct GridOpts {
    int episodes = 100;
    int trials = 5;
    int goals = kFinalCount;
    std::optional<int> resample_every;

    [[nodiscard]] ReplaySpec replay(const Common& c) const {
        return {TrialGrid{trials, goals}, episodes, resample_every, c.seed, c.threads};
    }
};

void add_common(CLI::App& sub, Common& c, bool with_out = true) {
    sub.add_option("--maze", c.maze, "Maze file")->check(CLI::ExistingFile)->capture_default_str();
    sub.add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sub.add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    if (with_out) sub.add_option("--out", c.out, "Output directory")->capture_default_str();
}

void add_grid(CLI::App& sub, GridOpts& g) {
    sub.add_option("--episodes", g.episodes, "Episodes per trial")->check(CLI::PositiveNumber)->capture_default_str();
    sub.add_option("--trials", g.trials, "Trials per goal")->check(CLI::PositiveNumber)->capture_default_str();
    sub.add_option("--goals", g.goals, "Goals 1..N are used")->check(CLI::Range(1, kFinalCount))->capture_default_str();
    sub.add_option("--resample-every", g.resample_every, "Re-initialise the weights every N episodes")
        ->check(CLI::PositiveNumber);
}

fs::path prepare(const std::string& dir) {
    fs::create_directories(dir);
    return dir;
}

void put(const fs::path& dir, const std::string& name, std::string_view text) {
    write_text_file((dir / name).string(), text);
}

void report(std::ostream& out, const std::string& label, const Summary& s) {
    out << label << ": n=" << s.n << " mean_best_ep=" << format_double(s.mean) << " std=" << format_double(s.std)
        << " reach=" << format_double(s.reach_fraction) << '\n';
}

void write_replay(const fs::path& dir, const std::string& label, const std::vector<TrialOutcome>& outcomes,
                  bool trace, bool save_weights, std::ostream& out) {
    put(dir, "trials.csv", trials_csv(outcomes));
    put(dir, "curve.csv", curve_csv(outcomes));
    const Summary s = summarize(outcomes);
    put(dir, "summary.csv", summary_csv({{label, s}}));
    if (trace) put(dir, "episodes.csv", episodes_csv(outcomes));
    if (save_weights) {
        const fs::path wdir = prepare((dir / "weights").string());
        for (const auto& o : outcomes) {
            std::ostringstream os;
            write_weight_snapshot(os, o.result.final_weights);
            put(wdir, "trial" + std::to_string(o.trial) + "_goal" + std::to_string(o.goal) + ".txt", os.str());
        }
    }
    report(out, label, s);
}

std::string genotype_columns(GenotypeKind kind) {
    if (kind == GenotypeKind::Hc) return "params_id,sigma,alpha_h,alpha_o";
    std::string s = "rule_id,eta,theta,alpha_h,alpha_o";
    for (int i = 1; i <= kRuleSize; ++i) s += ",dw" + std::to_string(i);
    return s;
}

std::string genotype_record(GenotypeKind kind, const Genotype& g, int id) {
    if (kind == GenotypeKind::Hc) return serialize_hc_record({id, to_hc_params(g)});
    return serialize_rule_record({id, to_rule(g)});
}

struct EvolveOpts {
    int generations = 300;
    int pop = 14;
    int elites = 4;
};

void cmd_evolve(GenotypeKind kind, const Common& c, const GridOpts& g, const EvolveOpts& e, std::ostream& out) {
    const Maze maze = load_maze(c.maze);
    GaConfig ga;
    ga.pop_size = e.pop;
    ga.elites = e.elites;
    ga.generations = e.generations;
    ga.validate();
    const EvalConfig eval{TrialGrid{g.trials, g.goals}, g.episodes, g.resample_every};
    Evaluator fn;
    if (kind == GenotypeKind::Dsp)
        fn = [&](const Genotype& x, StreamSeed s) { return evaluate_dsp(x, maze, eval, s); };
    else
        fn = [&](const Genotype& x, StreamSeed s) { return evaluate_hc(x, maze, eval, s); };

    const auto progress = [&](int gen, const std::vector<Genotype>&, const std::vector<double>& f) {
        double best = f.front(), sum = 0.0;
        for (double v : f) {
            best = std::min(best, v);
            sum += v;
        }
        out << "generation " << gen << " best " << format_double(best) << " mean "
            << format_double(sum / static_cast<double>(f.size())) << '\n';
    };
    const EvolutionResult result = evolve(ga, kind, fn, c.seed, c.threads, progress);

    std::string log = "generation,best_fitness,mean_fitness," + genotype_columns(kind) + '\n';
    for (const auto& rec : result.history)
        log += std::to_string(rec.generation) + ',' + format_double(rec.best_fitness) + ',' +
               format_double(rec.mean_fitness) + ',' + genotype_record(kind, rec.best, rec.generation) + '\n';

    const fs::path dir = prepare(c.out);
    put(dir, "evolution.csv", log);
    if (kind == GenotypeKind::Dsp)
        put(dir, "best_rule.csv", serialize_rule_bundle({{1, to_rule(result.best)}}));
    else
        put(dir, "best_params.csv", serialize_hc_bundle({{1, to_hc_params(result.best)}}));
    out << "best fitness " << format_double(result.best_fitness) << '\n';
}

std::string compare_row(const std::string& mode, int episodes, const Summary& d, const Summary& h, double p) {
    std::string s = mode + ',' + std::to_string(episodes);
    for (const Summary* x : {&d, &h})
        s += ',' + std::to_string(x->n) + ',' + format_double(x->mean) + ',' + format_double(x->std) + ',' +
             format_double(x->reach_fraction);
    return s + ',' + format_double(p) + '\n';
}

constexpr const char* kCompareHeader =
    "mode,episodes,dsp_n,dsp_mean,dsp_std,dsp_reach_fraction,hc_n,hc_mean,hc_std,hc_reach_fraction,p_value\n";

struct CompareOpts {
    std::string rules;
    int rule = 1;
    std::string params;
    int params_id = 1;
    bool per_run = false;
};

void cmd_compare(const Common& c, const GridOpts& g, const CompareOpts& o, std::ostream& out) {
    const Maze maze = load_maze(c.maze);
    const auto rules = load_rule_bundle(o.rules);
    const auto params = load_hc_bundle(o.params);
    const fs::path dir = prepare(c.out);

    if (!o.per_run) {
        const ReplaySpec spec = g.replay(c);
        const auto d = replay_dsp(maze, find_rule(rules, o.rule), spec);
        const auto h = replay_hc(maze, find_hc_params(params, o.params_id), spec);
        const Comparison cmp = compare_outcomes(d, h);
        const std::string dl = "dsp_rule_" + std::to_string(o.rule);
        const std::string hl = "hc_params_" + std::to_string(o.params_id);
        put(dir, "dsp_trials.csv", trials_csv(d));
        put(dir, "hc_trials.csv", trials_csv(h));
        put(dir, "summary.csv", summary_csv({{dl, cmp.dsp}, {hl, cmp.hc}}));
        put(dir, "compare.csv", std::string(kCompareHeader) + compare_row("per_trial", g.episodes, cmp.dsp, cmp.hc,
                                                                           cmp.p_value));
        report(out, dl, cmp.dsp);
        report(out, hl, cmp.hc);
        out << "p_value " << format_double(cmp.p_value) << '\n';
        return;
    }

    // one fitness value (mean best EP over the grid) per rule / parameter set
    std::string table = "kind,id,fitness,reach_fraction\n";
    std::vector<TrialOutcome> druns, hruns;
    double dr = 0.0, hr = 0.0;
    const auto run_row = [](int id, const Summary& s) {
        TrialOutcome o;
        o.trial = id;
        o.result.best_ep = s.mean;
        o.result.best_reached = s.mean < 100.0;
        return o;
    };
    for (const auto& r : rules) {
        ReplaySpec spec = g.replay(c);
        spec.seed = StreamSeed(c.seed).derive(static_cast<std::uint64_t>(r.id)).value();
        const Summary s = summarize(replay_dsp(maze, r.rule, spec));
        druns.push_back(run_row(r.id, s));
        dr += s.reach_fraction;
        table += "dsp," + std::to_string(r.id) + ',' + format_double(s.mean) + ',' + format_double(s.reach_fraction) + '\n';
    }
    for (const auto& p : params) {
        ReplaySpec spec = g.replay(c);
        spec.seed = StreamSeed(c.seed).derive(static_cast<std::uint64_t>(p.id)).value();
        const Summary s = summarize(replay_hc(maze, p.params, spec));
        hruns.push_back(run_row(p.id, s));
        hr += s.reach_fraction;
        table += "hc," + std::to_string(p.id) + ',' + format_double(s.mean) + ',' + format_double(s.reach_fraction) + '\n';
    }
    if (druns.empty() || hruns.empty())
        throw std::invalid_argument("per-run comparison needs at least one rule and one parameter set");
    Summary ds = summarize(druns);
    Summary hs = summarize(hruns);
    // reach columns: mean of the per-run trial reach fractions
    ds.reach_fraction = dr / static_cast<double>(druns.size());
    hs.reach_fraction = hr / static_cast<double>(hruns.size());
    const double p = wilcoxon_rank_sum(best_eps(druns), best_eps(hruns));
    put(dir, "per_run.csv", table);
    put(dir, "compare.csv", std::string(kCompareHeader) + compare_row("per_run", g.episodes, ds, hs, p));
    report(out, "dsp_runs", ds);
    report(out, "hc_runs", hs);
    out << "p_value " << format_double(p) << '\n';
}

void cmd_maze_check(const Common& c, const std::optional<std::string>& out_dir, std::ostream& out) {
    const Maze maze = load_maze(c.maze);
    const Pose start = maze.start_pose();
    out << "maze " << c.maze << '\n'
        << "size " << maze.grid().width() << 'x' << maze.grid().height() << '\n'
        << "start " << start.pos.x << ',' << start.pos.y << " facing North\n";
    std::string table = "goal,x,y,distance\n";
    double total = 0.0;
    for (int k = 1; k <= kFinalCount; ++k) {
        const GoalConfig goal(k);
        const Coord f = maze.final_cell(goal);
        const int d = maze.distance_to_goal(start.pos, goal);
        total += d;
        out << "final " << k << " at " << f.x << ',' << f.y << " distance " << d << '\n';
        table += std::to_string(k) + ',' + std::to_string(f.x) + ',' + std::to_string(f.y) + ',' + std::to_string(d) + '\n';
    }
    out << "mean distance " << format_double(total / kFinalCount) << '\n' << "ok\n";
    if (out_dir) put(prepare(*out_dir), "maze_check.csv", table);
}

std::vector<std::pair<std::string, Summary>> parse_summary_rows(std::string_view text) {
    std::vector<std::pair<std::string, Summary>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
        if (f.size() != 5) throw std::invalid_argument("summary table: expected 5 fields in '" + line + "'");
        Summary s;
        s.n = static_cast<std::size_t>(parse_integer(f[1]));
        s.mean = parse_double(f[2]);
        s.std = parse_double(f[3]);
        s.reach_fraction = parse_double(f[4]);
        rows.emplace_back(f[0], s);
    }
    return rows;
}

void cmd_summarize(const std::vector<std::string>& inputs, const std::vector<std::string>& labels,
                   const std::optional<std::string>& out_dir, std::ostream& out) {
    if (!labels.empty() && labels.size() != inputs.size())
        throw std::invalid_argument("give one --label per input or none");
    constexpr std::string_view summary_header = "label,n,mean_best_ep,std_best_ep,reach_fraction";
    std::vector<std::pair<std::string, Summary>> rows;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const std::string text = read_text_file(inputs[i]);
        if (text.starts_with(summary_header)) {
            for (auto& r : parse_summary_rows(text)) rows.push_back(std::move(r));
            continue;
        }
        rows.emplace_back(labels.empty() ? inputs[i] : labels[i], summarize(parse_trials_csv(text)));
    }
    const std::string table = summary_csv(rows);
    if (out_dir)
        put(prepare(*out_dir), "summary.csv", table);
    else
        out << table;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const std::string data = data_dir();
    Common common;
    common.maze = data + "/triple_t_maze.txt";
    GridOpts grid;
    EvolveOpts evo;
    CompareOpts cmp;
    cmp.rules = data + "/appendix_rules.csv";
    cmp.params = data + "/hc_params.csv";
    bool trace = false;
    bool save_weights = false;
    std::optional<std::string> opt_out;
    std::vector<std::string> inputs, labels;
    int baseline_episodes = 1000;

    CLI::App app{"Delayed synaptic plasticity experiments in the triple T-maze", "dsp"};
    app.set_config("--config", "", "TOML/INI file with option values (sections named after subcommands)");
    app.require_subcommand(1);

    auto* evolve_dsp = app.add_subcommand("evolve-dsp", "Evolve DSP rules with the GA");
    auto* evolve_hc = app.add_subcommand("evolve-hc", "Evolve hill-climbing parameters with the GA");
    for (auto* sub : {evolve_dsp, evolve_hc}) {
        add_common(*sub, common);
        add_grid(*sub, grid);
        sub->add_option("--generations", evo.generations)->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--pop", evo.pop, "Population size")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--elites", evo.elites)->check(CLI::NonNegativeNumber)->capture_default_str();
    }

    auto* replay_dsp_cmd = app.add_subcommand("replay-dsp", "Train fresh networks with a shipped rule");
    add_common(*replay_dsp_cmd, common);
    add_grid(*replay_dsp_cmd, grid);
    replay_dsp_cmd->add_option("--rules", cmp.rules, "Rule bundle")->check(CLI::ExistingFile)->capture_default_str();
    replay_dsp_cmd->add_option("--rule", cmp.rule, "Rule id")->capture_default_str();

    auto* replay_hc_cmd = app.add_subcommand("replay-hc", "Train fresh networks with the hill climber");
    add_common(*replay_hc_cmd, common);
    add_grid(*replay_hc_cmd, grid);
    replay_hc_cmd->add_option("--params", cmp.params, "HC parameter bundle")->check(CLI::ExistingFile)->capture_default_str();
    replay_hc_cmd->add_option("--params-id", cmp.params_id)->capture_default_str();

    for (auto* sub : {replay_dsp_cmd, replay_hc_cmd}) {
        sub->add_flag("--trace", trace, "Also write per-episode records (episodes.csv)");
        sub->add_flag("--save-weights", save_weights, "Write the final network of every trial");
    }

    auto* compare_cmd = app.add_subcommand("compare", "Replay DSP and HC on the same grid and test the difference");
    add_common(*compare_cmd, common);
    add_grid(*compare_cmd, grid);
    compare_cmd->add_option("--rules", cmp.rules)->check(CLI::ExistingFile)->capture_default_str();
    compare_cmd->add_option("--rule", cmp.rule)->capture_default_str();
    compare_cmd->add_option("--params", cmp.params)->check(CLI::ExistingFile)->capture_default_str();
    compare_cmd->add_option("--params-id", cmp.params_id)->capture_default_str();
    compare_cmd->add_flag("--per-run", cmp.per_run, "Compare per-rule fitness over whole bundles instead of per-trial EPs");

    auto* maze_check = app.add_subcommand("maze-check", "Validate a maze file and report goal distances");
    add_common(*maze_check, common, false);
    maze_check->add_option("--out", opt_out, "Also write maze_check.csv here");

    auto* summarize_cmd = app.add_subcommand("summarize", "Summary rows from trial or summary tables");
    summarize_cmd->add_option("inputs", inputs, "trials.csv or summary.csv files")->required()->check(CLI::ExistingFile);
    summarize_cmd->add_option("--label", labels, "Row label per input");
    summarize_cmd->add_option("--out", opt_out, "Write summary.csv here instead of stdout");

    auto* baseline = app.add_subcommand("baseline", "Mean EP of a uniformly random policy");
    add_common(*baseline, common);
    baseline->add_option("--episodes-per-goal", baseline_episodes)->check(CLI::PositiveNumber)->capture_default_str();

    std::vector<const char*> argv{"dsp"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (evolve_dsp->parsed()) {
            cmd_evolve(GenotypeKind::Dsp, common, grid, evo, out);
        } else if (evolve_hc->parsed()) {
            cmd_evolve(GenotypeKind::Hc, common, grid, evo, out);
        } else if (replay_dsp_cmd->parsed()) {
            const Maze maze = load_maze(common.maze);
            const auto rules = load_rule_bundle(cmp.rules);
            const auto outcomes = replay_dsp(maze, find_rule(rules, cmp.rule), grid.replay(common));
            write_replay(prepare(common.out), "dsp_rule_" + std::to_string(cmp.rule), outcomes, trace, save_weights, out);
        } else if (replay_hc_cmd->parsed()) {
            const Maze maze = load_maze(common.maze);
            const auto params = load_hc_bundle(cmp.params);
            const auto outcomes = replay_hc(maze, find_hc_params(params, cmp.params_id), grid.replay(common));
            write_replay(prepare(common.out), "hc_params_" + std::to_string(cmp.params_id), outcomes, trace,
                         save_weights, out);
        } else if (compare_cmd->parsed()) {
            cmd_compare(common, grid, cmp, out);
        } else if (maze_check->parsed()) {
            cmd_maze_check(common, opt_out, out);
        } else if (summarize_cmd->parsed()) {
            cmd_summarize(inputs, labels, opt_out, out);
        } else if (baseline->parsed()) {
            const Maze maze = load_maze(common.maze);
            const double b = random_policy_baseline(maze, baseline_episodes, common.seed);
            put(prepare(common.out), "baseline.csv",
                "episodes_per_goal,mean_ep\n" + std::to_string(baseline_episodes) + ',' + format_double(b) + '\n');
            out << "random policy mean EP " << format_double(b) << '\n';
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace dsp::cli
