#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace leosched {

/// Exogenous-trace generation: the orbit's light/eclipse cycle, solar
/// harvest, ground-station contact windows, channel SNR, and the mission
/// frame rate. Everything downstream consumes the trace; nothing mutates it.
struct EnvParams {
    int orbit_period_slots = 96;
    double light_fraction = 0.66;           // lit share of each orbit, (0,1]
    double harvest_peak = 30.0;             // J/min at normal solar incidence
    int contact_windows_per_orbit = 2;      // placed alternately in light/eclipse
    int contact_window_len = 8;             // slots per contact pass
    double slot_duration = 60.0;            // seconds
    double bandwidth = 80e6;                // Hz
    double snr_lo = 15.0, snr_hi = 20.0;    // linear h/N0 ratio
    double frame_rate_lo = 0.0, frame_rate_hi = 4.0;  // frames/s
    double frame_size_bits = 60e6;          // bits per frame
    double base_load = 0.0;                 // J per slot of non-mission draw
    std::uint64_t seed = 42;
};

struct SlotContext {
    std::int64_t t = 0;           // 1-based slot index
    double harvest_energy = 0.0;  // J available this slot; 0 in eclipse
    bool in_light = false;
    bool contact = false;         // ground-station link available
    double snr = 0.0;             // linear h/N0, revealed after acting
    double frame_rate = 0.0;      // frames/s demanded by the mission
    double base_load = 0.0;       // J per slot
};

/// Throws std::invalid_argument naming the offending field.
void validate(const EnvParams& p);

/// Lit slots at the start of each orbit (rounded light_fraction share).
int lit_slot_count(const EnvParams& p);

/// Solar harvest rate in J/min at slot t; zero in eclipse. The incidence
/// angle sweeps pi/2 -> 0 -> pi/2 linearly across the lit arc.
double harvest_rate(std::int64_t t, const EnvParams& p);

/// Contact spans within one orbit as (start_phase, length) pairs.
std::vector<std::pair<int, int>> contact_spans(const EnvParams& p);

/// Deterministic trace of `horizon` slots: equal params give a trace that
/// is identical bit for bit, and traces for longer horizons extend shorter
/// ones. SNR and frame rate are i.i.d. uniform over their ranges.
std::vector<SlotContext> build_trace(const EnvParams& p, std::int64_t horizon);

}  // namespace leosched
