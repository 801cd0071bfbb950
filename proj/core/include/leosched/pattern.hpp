#pragma once

#include <vector>

#include "leosched/oco.hpp"
#include "leosched/record.hpp"

namespace leosched {

/// Hypercube partition of the pattern space [0,1]^dims into levels^dims
/// cells of equal size.
struct PatternPartition {
    int dims = 2;
    int levels = 2;
    int window_count() const;
};

/// Pattern features of a slot, strictly interior to their cells:
/// (light indicator, contact indicator) mapped to {0.25, 0.75}.
std::vector<double> pattern_vector(const SlotContext& ctx);

/// Row-major cell index of c in the partition; the boundary c_n = 1 is
/// assigned to the top cell. Total over [0,1]^dims.
int window_index(const std::vector<double>& c, const PatternPartition& part);

/// Window id per slot for a whole trace.
std::vector<int> window_assignment(const std::vector<SlotContext>& trace,
                                   const PatternPartition& part);

enum class InitRule { BoxMidpoint, Zero, Nominal };

/// Where the two virtual queues live. PerWindow keeps both inside each
/// window's learner. Hybrid keeps the sensing/compute queue per window (that
/// constraint admits a feasible point in every window) but shares one global
/// transmit queue, since no-contact windows cannot satisfy the transmit
/// constraint locally at all. Global shares both.
enum class VqScope { PerWindow, Hybrid, Global };

/// First-visit duty plan under InitRule::Nominal, keyed on a slot's
/// light/contact indicators.
struct NominalPlan {
    double cpu_lit = 0.0;
    double cpu_eclipse = 0.0;
    double tx_contact = 0.0;
};

struct RunOptions {
    InitRule init = InitRule::BoxMidpoint;
    NominalPlan nominal{};
    VqScope vq_scope = VqScope::PerWindow;
    bool literal_mode = false;
};

/// Duty plan from prior-known constants alone (harvest model, contact
/// schedule, demand ranges): lit slots compute up to the harvest-covered
/// level, eclipse slots carry the remainder of the mean demand, and contact
/// slots downlink the matching share. The plan over-provisions work by the
/// queue-coupling factor rho^2 so the learner settles near balance.
NominalPlan nominal_duty_plan(const EnvParams& env, const PowerParams& pp);

/// Per-window learner bookkeeping.
struct WindowState {
    int window_id = 0;
    LearnerState learner{};
    std::int64_t visits = 0;
};

/// The pattern-aware online scheduler: one learner per window, physical
/// queues global. Battery starts full, data queues empty. Decisions at a
/// window's first visit follow opts.init; later visits take one projected
/// drift-plus-penalty step from that window's stored state.
RunRecord run_pattern_aware(const std::vector<SlotContext>& trace, const PowerParams& pp,
                            const OcoParams& op, const PatternPartition& part,
                            const RunOptions& opts = {},
                            std::vector<WindowState>* final_windows = nullptr);

}  // namespace leosched
