#include "leosched/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace leosched {

namespace {

constexpr double kBoxSlack = 1e-6;  // relative tolerance on box membership

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("dynamics: " + what);
}

}  // namespace

void validate(const PowerParams& pp) {
    if (pp.cam_power < 0) fail("cam_power must be >= 0");
    if (pp.capacitance_coeff < 0) fail("capacitance_coeff must be >= 0");
    if (pp.bits_per_cycle < 0) fail("bits_per_cycle must be >= 0");
    if (pp.effective_fraction < 0 || pp.effective_fraction > 1)
        fail("effective_fraction must be in [0, 1]");
    if (pp.cpu_max < 0) fail("cpu_max must be >= 0");
    if (pp.rate_max < 0) fail("rate_max must be >= 0");
    if (pp.battery_cap < 0) fail("battery_cap must be >= 0");
    if (!(pp.slot_seconds > 0)) fail("slot_seconds must be > 0");
    if (!(pp.bandwidth > 0)) fail("bandwidth must be > 0");
    if (pp.frame_bits < 0) fail("frame_bits must be >= 0");
}

bool decision_feasible(const Decision& d, const SlotContext& ctx, const PowerParams& pp) {
    const double f_hi = pp.cpu_max * (1.0 + kBoxSlack);
    const double r_hi = (ctx.contact ? pp.rate_max : 0.0) * (1.0 + kBoxSlack) + 1e-9;
    return d.cpu_freq >= -kBoxSlack * pp.cpu_max - 1e-9 && d.cpu_freq <= f_hi &&
           d.tx_rate >= -kBoxSlack * pp.rate_max - 1e-9 && d.tx_rate <= r_hi;
}

double sensing_energy(const PowerParams& pp) {
    return pp.cam_power * (pp.slot_seconds / 60.0);
}

double compute_energy(double cpu_freq, const PowerParams& pp) {
    if (cpu_freq < 0 || cpu_freq > pp.cpu_max * (1.0 + kBoxSlack))
        fail("compute_energy: cpu_freq outside [0, cpu_max]");
    return pp.capacitance_coeff * cpu_freq * cpu_freq * cpu_freq * pp.slot_seconds;
}

double comm_power(double tx_rate, double snr, const PowerParams& pp) {
    if (!(snr > 0)) fail("comm_power: snr must be > 0");
    if (tx_rate < 0) fail("comm_power: tx_rate must be >= 0");
    return (std::exp2(tx_rate / pp.bandwidth) - 1.0) / snr;
}

double comm_energy(double tx_rate, double snr, const PowerParams& pp) {
    return comm_power(tx_rate, snr, pp) * pp.slot_seconds;
}

EnergyAccount energy_balance(const Decision& d, const SlotContext& ctx,
                             const PowerParams& pp, double battery) {
    EnergyAccount a;
    a.e_sen = sensing_energy(pp);
    a.e_cmp = compute_energy(d.cpu_freq, pp);
    a.e_com = comm_energy(d.tx_rate, ctx.snr, pp);
    const double consumption = a.e_sen + a.e_cmp + a.e_com + ctx.base_load;
    if (ctx.harvest_energy >= consumption) {
        const double headroom = std::max(0.0, pp.battery_cap - battery);
        a.e_in = std::min(ctx.harvest_energy - consumption, headroom);
    } else {
        a.e_out = consumption - ctx.harvest_energy;
    }
    return a;
}

double battery_step(double battery, const EnergyAccount& acct, const PowerParams& pp) {
    return std::min(std::max(battery + acct.e_in - acct.e_out, 0.0), pp.battery_cap);
}

double q_cmp_step(double q, const SlotContext& ctx, const Decision& d, const PowerParams& pp) {
    const double arrivals = pp.frame_bits * ctx.frame_rate * pp.slot_seconds;
    const double service = pp.bits_per_cycle * d.cpu_freq * pp.slot_seconds;
    return std::max(q + arrivals - service, 0.0);
}

double processed_amount(double q, const SlotContext& ctx, const Decision& d,
                        const PowerParams& pp) {
    const double arrivals = pp.frame_bits * ctx.frame_rate * pp.slot_seconds;
    const double service = pp.bits_per_cycle * d.cpu_freq * pp.slot_seconds;
    return std::min(q + arrivals, service);
}

double q_com_step(double q, double a_p, const Decision& d, const PowerParams& pp) {
    return std::max(q + pp.effective_fraction * a_p - d.tx_rate * pp.slot_seconds, 0.0);
}

Objective discharge_objective(const Decision& d, const SlotContext& ctx,
                              const PowerParams& pp) {
    if (!decision_feasible(d, ctx, pp)) fail("discharge_objective: infeasible decision");
    const double consumption = sensing_energy(pp) + compute_energy(d.cpu_freq, pp) +
                               comm_energy(d.tx_rate, ctx.snr, pp) + ctx.base_load;
    Objective obj;
    obj.value = std::max(0.0, consumption - ctx.harvest_energy);
    if (consumption >= ctx.harvest_energy) {  // kink resolved to the discharging branch
        obj.grad_f = 3.0 * pp.capacitance_coeff * d.cpu_freq * d.cpu_freq * pp.slot_seconds;
        obj.grad_r = std::log(2.0) / pp.bandwidth * std::exp2(d.tx_rate / pp.bandwidth) /
                     ctx.snr * pp.slot_seconds;
    }
    return obj;
}

std::pair<double, double> constraint_values(const Decision& d, const SlotContext& ctx,
                                            const PowerParams& pp) {
    const double g1 = pp.frame_bits * ctx.frame_rate - pp.bits_per_cycle * d.cpu_freq;
    const double g2 = pp.effective_fraction * pp.bits_per_cycle * d.cpu_freq - d.tx_rate;
    return {g1, g2};
}

}  // namespace leosched
