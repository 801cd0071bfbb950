#pragma once

#include <utility>

#include "leosched/environment.hpp"

namespace leosched {

/// Platform constants for the energy and data models. slot_seconds,
/// bandwidth and frame_bits mirror the trace generator's values; the config
/// loader fills both structs from single keys.
struct PowerParams {
    double cam_power = 2.0;            // J/min while sensing (camera power)
    double capacitance_coeff = 1e-28;  // J*s^2/cycle^3, CPU energy coefficient
    double bits_per_cycle = 0.1;       // bits processed per CPU cycle
    double effective_fraction = 0.25;  // share of processed bits to downlink
    double cpu_max = 4e9;              // cycles/s
    double rate_max = 5e8;             // bit/s
    double battery_cap = 10800.0;      // J
    double slot_seconds = 60.0;
    double bandwidth = 80e6;           // Hz
    double frame_bits = 60e6;          // bits per sensed frame
};

struct SatelliteState {
    double battery = 0.0;  // J, in [0, battery_cap]
    double q_cmp = 0.0;    // bits waiting for on-board compute
    double q_com = 0.0;    // bits waiting for downlink
};

/// Per-slot control: CPU frequency and downlink rate.
struct Decision {
    double cpu_freq = 0.0;  // cycles/s
    double tx_rate = 0.0;   // bit/s, forced to 0 outside contact
};

/// Energy split for one slot. e_out and e_in are mutually exclusive.
struct EnergyAccount {
    double e_sen = 0.0, e_cmp = 0.0, e_com = 0.0;  // J per subsystem
    double e_out = 0.0;                            // J drawn from battery
    double e_in = 0.0;                             // J charged into battery
};

/// Discharge objective value with its subgradient in (cpu_freq, tx_rate).
struct Objective {
    double value = 0.0;
    double grad_f = 0.0;
    double grad_r = 0.0;
};

void validate(const PowerParams& pp);

bool decision_feasible(const Decision& d, const SlotContext& ctx, const PowerParams& pp);

/// Camera energy for one slot: P_sen * T_d.
double sensing_energy(const PowerParams& pp);

/// CPU energy a*f^3*T_d. Rejects cpu_freq outside [0, cpu_max].
double compute_energy(double cpu_freq, const PowerParams& pp);

/// Transmit power (W) required for rate r: (2^(r/B) - 1) / snr.
/// Exact inverse of the log channel-rate model. Rejects snr <= 0.
double comm_power(double tx_rate, double snr, const PowerParams& pp);

/// comm_power * T_d, in J.
double comm_energy(double tx_rate, double snr, const PowerParams& pp);

/// Splits the slot's energy books. With C the total consumption:
/// harvest >= C charges the battery up to its headroom, otherwise the
/// shortfall is discharged. Never both in one slot.
EnergyAccount energy_balance(const Decision& d, const SlotContext& ctx,
                             const PowerParams& pp, double battery);

/// Battery queue update, clipped to [0, battery_cap].
double battery_step(double battery, const EnergyAccount& acct, const PowerParams& pp);

/// Waiting-for-compute queue: max(q + D*f_sen*T_d - kappa*f_cmp*T_d, 0).
double q_cmp_step(double q, const SlotContext& ctx, const Decision& d, const PowerParams& pp);

/// Bits actually processed this slot: min(q + arrivals, kappa*f_cmp*T_d).
double processed_amount(double q, const SlotContext& ctx, const Decision& d, const PowerParams& pp);

/// Waiting-for-downlink queue: max(q + rho*a_p - R*T_d, 0).
double q_com_step(double q, double a_p, const Decision& d, const PowerParams& pp);

/// Per-slot discharge max(0, consumption - harvest) and its subgradient.
/// At the kink the discharging branch is reported. Rejects infeasible d.
Objective discharge_objective(const Decision& d, const SlotContext& ctx, const PowerParams& pp);

/// Long-term constraint integrands, in bit/s:
///   g1 = D*f_sen - kappa*f_cmp     (sensed vs processed)
///   g2 = rho*kappa*f_cmp - R       (processed vs downlinked)
std::pair<double, double> constraint_values(const Decision& d, const SlotContext& ctx,
                                            const PowerParams& pp);

}  // namespace leosched
