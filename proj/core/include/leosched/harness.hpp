#pragma once

#include <string>
#include <vector>

#include "leosched/baselines.hpp"
#include "leosched/metrics.hpp"
#include "leosched/pattern.hpp"

namespace leosched {

struct SweepSpec {
    std::string param;           // empty = no sweep
    std::vector<double> values;
};

/// Everything one experiment needs. alpha/gamma/eta <= 0 derive the theory
/// schedule from beta and the horizon.
struct ExperimentConfig {
    EnvParams env{};
    PowerParams power{};
    double beta = 14.0;
    double alpha = 0.0, gamma = 0.0, eta = 0.0;
    PatternPartition partition{};
    std::int64_t horizon = 1440;
    std::vector<std::string> policies{"oco", "greedy", "pattern_opt", "dynamic_opt"};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    SweepSpec sweep{};
    std::string output_dir = "out";
    bool theory_mode = false;
    RunOptions run_options{};
    SolverOptions solver{};
};

ExperimentConfig default_config();

/// Parses a JSON config (// comments allowed); missing keys keep defaults,
/// unknown keys are rejected. Throws std::runtime_error with a field path.
ExperimentConfig load_config(const std::string& path);

/// Effective learner parameters after the auto-derivation rules.
OcoParams oco_params_for(const ExperimentConfig& cfg);

/// Re-copies the shared physical constants (slot duration, bandwidth,
/// frame size) from env into power. Called by the loader and the sweep.
void sync_mirrors(ExperimentConfig& cfg);

/// Names accepted by sweep.param / apply_sweep_value.
std::vector<std::string> sweepable_params();
void apply_sweep_value(ExperimentConfig& cfg, const std::string& param, double value);

struct ValidationResult {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

/// Field-level checks of every parameter invariant; with theory_mode on,
/// also warns when alpha < (gamma^2 beta^2 + eta)/2.
ValidationResult validate_config(const ExperimentConfig& cfg);

struct SummaryRow {
    std::string param;   // "-" when not sweeping
    double value = 0.0;
    std::uint64_t seed = 0;
    std::string policy;
    double total_dod = 0.0;
    double terminal_regret = 0.0;  // vs the pattern benchmark on the same trace
    double viol_g1 = 0.0, viol_g2 = 0.0;
    double wall_ms = 0.0;
};

struct ExperimentResult {
    std::vector<std::string> files;      // everything written, run CSVs first
    std::string summary_path;
    std::vector<SummaryRow> summary;
    bool solver_converged = true;
};

/// Runs every (sweep value x seed x policy) cell, writing one RunRecord CSV
/// per cell and one summary CSV per experiment. Cells run in parallel
/// (jobs <= 0 picks the hardware default); outputs are deterministic for a
/// fixed config apart from the '#' header line and the wall_ms column.
/// Partial outputs are removed on failure.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 0);

/// FNV-1a over a file's CSV body: '#' comment lines are skipped, and the
/// trailing wall_ms column of summary rows is excluded when drop_last_column
/// is set. Used by the determinism checks.
std::uint64_t csv_body_hash(const std::string& path, bool drop_last_column = false);

std::uint64_t params_hash(const ExperimentConfig& cfg);

}  // namespace leosched
