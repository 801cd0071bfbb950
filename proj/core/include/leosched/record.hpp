#pragma once

#include <string>
#include <vector>

#include "leosched/dynamics.hpp"

namespace leosched {

/// One logged slot. Queue and battery values are post-update.
struct SlotRow {
    std::int64_t t = 0;
    int window_id = 0;
    Decision decision{};
    double e_out = 0.0, e_in = 0.0;
    double battery = 0.0, q_cmp = 0.0, q_com = 0.0;
    double g1 = 0.0, g2 = 0.0;
    double vq1 = 0.0, vq2 = 0.0;
};

/// Full log of one policy run plus the exogenous trace it consumed.
/// Basis of all metrics and of the CSV output.
struct RunRecord {
    std::vector<SlotRow> rows;
    std::vector<SlotContext> trace;
    std::string policy;
    std::uint64_t seed = 0;
    std::uint64_t params_hash = 0;
};

/// Replays a fixed decision sequence through the physical dynamics.
/// window_of_slot may be empty (window_id logged as 0).
RunRecord simulate_decisions(const std::vector<SlotContext>& trace,
                             const std::vector<Decision>& decisions,
                             const PowerParams& pp,
                             const std::vector<int>& window_of_slot = {},
                             std::string policy = "replay");

/// Writes the record as CSV: one timestamped '#' header line, a column
/// header, then one row per slot with floats at 9 significant digits.
void write_csv(const RunRecord& rec, const std::string& path);

}  // namespace leosched
