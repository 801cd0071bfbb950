#pragma once

#include <vector>

#include "leosched/record.hpp"

namespace leosched {

/// Knobs of the projected-subgradient / augmented-Lagrangian solver behind
/// the two offline benchmarks.
struct SolverOptions {
    int max_iters = 2000;         // inner iterations per round, step c/sqrt(iter)
    int outer_rounds = 8;         // multiplier updates, penalty *= growth each round
    double penalty_growth = 2.0;
    double step_c = 0.3;          // in unit-box coordinates
    double tolerance = 1e-6;      // relative terminal-constraint residual target
};

struct GreedyReport {
    bool feasible = true;
    double residual_g1 = 0.0;  // terminal running sums, bit/s
    double residual_g2 = 0.0;
};

/// Causal baseline: per slot the smallest CPU frequency keeping the running
/// sensed-vs-processed sum nonpositive, and the smallest rate keeping the
/// running processed-vs-sent sum nonpositive (catch-up deferred while the
/// link is down). Reports terminal residuals when capacity was insufficient.
RunRecord greedy_schedule(const std::vector<SlotContext>& trace, const PowerParams& pp,
                          GreedyReport* report = nullptr);

struct OfflineSolution {
    std::vector<Decision> decisions;        // one per slot
    std::vector<Decision> window_decisions; // pattern solves only, one per window
    double objective = 0.0;                 // J, total discharge of `decisions`
    double residual_g1 = 0.0;               // terminal constraint sums, bit/s
    double residual_g2 = 0.0;
    bool converged = true;
};

/// Clairvoyant per-slot benchmark: minimises total discharge subject to the
/// two aggregate constraints and the per-slot box.
OfflineSolution solve_offline_dynamic(const std::vector<SlotContext>& trace,
                                      const PowerParams& pp,
                                      const SolverOptions& opts = {});

/// Clairvoyant benchmark restricted to one fixed decision per window; the
/// aggregate constraints couple all windows. The window's rate is realized
/// only on its contact slots, so a window without any contact slot cannot
/// transmit and its rate is 0.
OfflineSolution solve_offline_pattern(const std::vector<SlotContext>& trace,
                                      const PowerParams& pp,
                                      const std::vector<int>& window_of_slot,
                                      int window_count,
                                      const SolverOptions& opts = {});

/// Exact-on-lattice dynamic optimum by DP over quantised decisions and
/// cumulative work/transmit totals. Test oracle; requires T <= 8 and
/// grid_levels <= 25.
OfflineSolution brute_force_oracle(const std::vector<SlotContext>& trace,
                                   const PowerParams& pp, int grid_levels);

}  // namespace leosched
