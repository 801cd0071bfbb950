// Command-line front end: validate a config, run it once, or run its sweep.
// Exit codes: 0 ok, 1 config error, 2 offline solver did not converge.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leosched/harness.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> policies;
    bool theory_mode = false;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_outputs) {
    cmd->add_option("-c,--config", a.config_path, "JSON config file")->required();
    cmd->add_flag("--theory-mode", a.theory_mode,
                  "check the alpha >= (gamma^2 beta^2 + eta)/2 condition");
    if (with_outputs) {
        cmd->add_option("-o,--out", a.out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", a.seeds, "seed override, repeatable");
        cmd->add_option("--policy", a.policies,
                        "restrict to these policies (oco, greedy, pattern_opt, dynamic_opt)");
        cmd->add_option("-j,--jobs", a.jobs, "parallel cells (default: hardware)");
    }
}

int load_and_validate(const CommonArgs& a, bool sweeping, leosched::ExperimentConfig& cfg) {
    try {
        cfg = leosched::load_config(a.config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    if (!a.out_dir.empty()) cfg.output_dir = a.out_dir;
    if (!a.seeds.empty()) cfg.seeds = a.seeds;
    if (!a.policies.empty()) cfg.policies = a.policies;
    if (a.theory_mode) cfg.theory_mode = true;
    if (!sweeping) cfg.sweep = {};

    const leosched::ValidationResult v = leosched::validate_config(cfg);
    for (const auto& w : v.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!v.ok()) {
        for (const auto& e : v.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
        return 1;
    }
    return 0;
}

int execute(const leosched::ExperimentConfig& cfg, int jobs) {
    try {
        const leosched::ExperimentResult res = leosched::run_experiment(cfg, jobs);
        std::printf("wrote %zu files, summary: %s\n", res.files.size(),
                    res.summary_path.c_str());
        if (!res.solver_converged) {
            std::fprintf(stderr, "error: offline solver did not reach its residual target\n");
            return 2;
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO Earth-observation energy scheduling experiments"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, val_args;
    CLI::App* run = app.add_subcommand("run", "run every policy once per seed");
    add_common(run, run_args, true);
    CLI::App* sweep = app.add_subcommand("sweep", "run the config's parameter sweep");
    add_common(sweep, sweep_args, true);
    std::string sweep_param;
    std::vector<double> sweep_values;
    sweep->add_option("--param", sweep_param, "sweep parameter (overrides config)");
    sweep->add_option("--values", sweep_values, "sweep values (overrides config)")
        ->delimiter(',');
    CLI::App* val = app.add_subcommand("validate", "check a config and exit");
    add_common(val, val_args, false);

    CLI11_PARSE(app, argc, argv);

    leosched::ExperimentConfig cfg;
    if (run->parsed()) {
        if (const int rc = load_and_validate(run_args, false, cfg)) return rc;
        return execute(cfg, run_args.jobs);
    }
    if (sweep->parsed()) {
        if (const int rc = load_and_validate(sweep_args, true, cfg)) return rc;
        if (!sweep_param.empty()) cfg.sweep.param = sweep_param;
        if (!sweep_values.empty()) cfg.sweep.values = sweep_values;
        if (cfg.sweep.param.empty() || cfg.sweep.values.empty()) {
            std::fprintf(stderr, "error: sweep needs a parameter and values\n");
            return 1;
        }
        const leosched::ValidationResult v = leosched::validate_config(cfg);
        if (!v.ok()) {
            for (const auto& e : v.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
            return 1;
        }
        return execute(cfg, sweep_args.jobs);
    }
    // validate
    if (const int rc = load_and_validate(val_args, true, cfg)) return rc;
    if (cfg.theory_mode) {
        const leosched::OcoParams op = leosched::oco_params_for(cfg);
        const leosched::TheoryBounds b =
            leosched::theory_bounds(cfg.power, cfg.env.frame_rate_hi);
        std::printf("theory: alpha=%.6g gamma=%.6g eta=%.6g  G1(box diameter)=%.6g  "
                    "G2(max ||g||)=%.6g\n",
                    op.alpha, op.gamma, op.eta, b.box_diameter, b.g_norm_max);
    }
    std::printf("config ok\n");
    return 0;
}
