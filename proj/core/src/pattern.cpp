#include "leosched/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace leosched {

int PatternPartition::window_count() const {
    int k = 1;
    for (int n = 0; n < dims; ++n) k *= levels;
    return k;
}

std::vector<double> pattern_vector(const SlotContext& ctx) {
    return {ctx.in_light ? 0.75 : 0.25, ctx.contact ? 0.75 : 0.25};
}

int window_index(const std::vector<double>& c, const PatternPartition& part) {
    if (static_cast<int>(c.size()) != part.dims)
        throw std::invalid_argument("window_index: pattern dimension mismatch");
    if (part.levels < 1 || part.dims < 1)
        throw std::invalid_argument("window_index: partition must have dims,levels >= 1");
    int id = 0, stride = 1;
    for (int n = 0; n < part.dims; ++n) {
        // c_n = 1 belongs to the top cell.
        const double cn = std::clamp(c[n], 0.0, 1.0 - 1e-12);
        id += static_cast<int>(cn * part.levels) * stride;
        stride *= part.levels;
    }
    return id;
}

std::vector<int> window_assignment(const std::vector<SlotContext>& trace,
                                   const PatternPartition& part) {
    std::vector<int> ids(trace.size());
    for (size_t i = 0; i < trace.size(); ++i)
        ids[i] = window_index(pattern_vector(trace[i]), part);
    return ids;
}

namespace {

Decision initial_decision(const SlotContext& ctx, const PowerParams& pp,
                          const RunOptions& opts) {
    switch (opts.init) {
        case InitRule::Zero:
            return {0.0, 0.0};
        case InitRule::Nominal:
            return {std::clamp(ctx.in_light ? opts.nominal.cpu_lit : opts.nominal.cpu_eclipse,
                               0.0, pp.cpu_max),
                    ctx.contact ? std::clamp(opts.nominal.tx_contact, 0.0, pp.rate_max)
                                : 0.0};
        case InitRule::BoxMidpoint:
        default:
            return {pp.cpu_max / 2.0, ctx.contact ? pp.rate_max / 2.0 : 0.0};
    }
}

}  // namespace

NominalPlan nominal_duty_plan(const EnvParams& env, const PowerParams& pp) {
    NominalPlan plan;
    if (pp.bits_per_cycle <= 0.0) return plan;
    const double rho = pp.effective_fraction;
    // Mean work demand in cycles/s, padded by the rho^2 pull the transmit
    // queue exerts on the cpu coordinate.
    const double mean_rate = 0.5 * (env.frame_rate_lo + env.frame_rate_hi);
    const double demand =
        pp.frame_bits * mean_rate / pp.bits_per_cycle * (1.0 + rho * rho);

    const double lit_share = static_cast<double>(lit_slot_count(env)) /
                             static_cast<double>(env.orbit_period_slots);
    const double ecl_share = 1.0 - lit_share;
    // Mean lit harvest: the incidence sweep averages cos to 2/pi.
    const double lit_harvest =
        env.harvest_peak * (2.0 / std::numbers::pi) * (env.slot_duration / 60.0);
    const double slack =
        lit_harvest - pp.cam_power * (pp.slot_seconds / 60.0) - env.base_load;
    const double lit_free =
        slack > 0.0
            ? std::cbrt(slack / (pp.capacitance_coeff * pp.slot_seconds))
            : 0.0;

    plan.cpu_lit = std::min({pp.cpu_max, std::max(lit_free, 0.0),
                             lit_share > 0.0 ? demand / lit_share : pp.cpu_max});
    const double remainder = demand - plan.cpu_lit * lit_share;
    plan.cpu_eclipse =
        ecl_share > 0.0 ? std::clamp(remainder / ecl_share, 0.0, pp.cpu_max) : 0.0;

    const double contact_share =
        std::min<double>(env.orbit_period_slots,
                         std::max(1, env.contact_window_len * env.contact_windows_per_orbit)) /
        static_cast<double>(env.orbit_period_slots);
    plan.tx_contact = std::clamp(
        rho * pp.bits_per_cycle * (plan.cpu_lit * lit_share + plan.cpu_eclipse * ecl_share) /
            contact_share,
        0.0, pp.rate_max);
    return plan;
}

RunRecord run_pattern_aware(const std::vector<SlotContext>& trace, const PowerParams& pp,
                            const OcoParams& op_in, const PatternPartition& part,
                            const RunOptions& opts, std::vector<WindowState>* final_windows) {
    if (trace.empty()) throw std::invalid_argument("run_pattern_aware: empty trace");
    if (!(op_in.alpha > 0.0) || !(op_in.gamma > 0.0))
        throw std::invalid_argument("run_pattern_aware: alpha and gamma must be > 0");

    OcoParams op = op_in;
    op.literal_mode = opts.literal_mode;
    if (!op.literal_mode && op.grad_clip <= 0.0) {
        double snr_lo = trace.front().snr;
        for (const SlotContext& c : trace) snr_lo = std::min(snr_lo, c.snr);
        op.grad_clip = 10.0 * objective_grad_bound(pp, snr_lo);
    }

    std::vector<WindowState> windows(static_cast<size_t>(part.window_count()));
    for (size_t k = 0; k < windows.size(); ++k) windows[k].window_id = static_cast<int>(k);
    Vec2 shared_vq{0.0, 0.0};

    RunRecord rec;
    rec.policy = "oco";
    rec.trace = trace;
    rec.rows.reserve(trace.size());

    SatelliteState s;
    s.battery = pp.battery_cap;
    for (const SlotContext& ctx : trace) {
        const int k = window_index(pattern_vector(ctx), part);
        WindowState& w = windows[static_cast<size_t>(k)];
        switch (opts.vq_scope) {
            case VqScope::Global:
                w.learner.vq = shared_vq;
                break;
            case VqScope::Hybrid:
                w.learner.vq[1] = shared_vq[1];
                break;
            case VqScope::PerWindow:
                break;
        }

        const Decision x = w.visits == 0 ? initial_decision(ctx, pp, opts)
                                         : oco_step(w.learner, op, ctx, pp);

        // snr is revealed now; everything below is post-observation.
        const Objective obj = discharge_objective(x, ctx, pp);
        const auto [g1, g2] = constraint_values(x, ctx, pp);
        const Vec2 g_tilde{op.gamma * g1, op.gamma * g2};
        const Vec2 vq_next = vq_update(w.learner.vq, g_tilde);
        if (opts.vq_scope == VqScope::Global) shared_vq = vq_next;
        if (opts.vq_scope == VqScope::Hybrid) shared_vq[1] = vq_next[1];
        w.learner.vq = vq_next;
        w.learner.x_prev = x;
        w.learner.g_prev = g_tilde;
        w.learner.grad_prev = {obj.grad_f, obj.grad_r};
        if (op.literal_mode) {
            w.learner.e_out_prev =
                w.visits == 0 ? 0.0
                              : std::clamp(w.learner.e_out_prev - 1.0 / (2.0 * op.alpha),
                                           0.0, pp.battery_cap);
        }
        ++w.visits;

        const EnergyAccount acct = energy_balance(x, ctx, pp, s.battery);
        const double a_p = processed_amount(s.q_cmp, ctx, x, pp);
        s.battery = battery_step(s.battery, acct, pp);
        const double q_cmp_next = q_cmp_step(s.q_cmp, ctx, x, pp);
        s.q_com = q_com_step(s.q_com, a_p, x, pp);
        s.q_cmp = q_cmp_next;

        rec.rows.push_back({ctx.t, k, x, acct.e_out, acct.e_in, s.battery, s.q_cmp, s.q_com,
                            g1, g2, vq_next[0], vq_next[1]});
    }

    if (final_windows) *final_windows = std::move(windows);
    return rec;
}

}  // namespace leosched
