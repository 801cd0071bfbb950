#pragma once

#include <vector>

#include "leosched/record.hpp"

namespace leosched {

struct RegretSeries {
    std::vector<double> regret;        // cumulative objective gap per slot
    std::vector<double> violation_g1;  // cumulative raw (signed) constraint sums
    std::vector<double> violation_g2;
};

struct DodStats {
    double total = 0.0;              // J discharged over the run
    double max_eclipse_depth = 0.0;  // J, worst contiguous eclipse span
    double battery_min = 0.0;        // J, lowest battery level seen
};

/// Per-slot discharge objective of a fixed decision sequence on a trace.
std::vector<double> slot_objectives(const std::vector<SlotContext>& trace,
                                    const std::vector<Decision>& decisions,
                                    const PowerParams& pp);

/// Cumulative regret of a run against benchmark per-slot objectives
/// evaluated on the same trace, plus the run's violation series.
RegretSeries regret(const RunRecord& run, const std::vector<double>& bench_slot_objectives);

/// Violation series only (regret member left empty).
RegretSeries violations(const RunRecord& run);

DodStats dod_stats(const RunRecord& run);

}  // namespace leosched
