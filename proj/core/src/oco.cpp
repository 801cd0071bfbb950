#include "leosched/oco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace leosched {

OcoParams default_oco_params(double beta, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("default_oco_params: horizon must be >= 1");
    const auto T = static_cast<double>(horizon);
    OcoParams op;
    op.beta = beta;
    op.gamma = std::pow(T, 0.25);
    op.eta = std::sqrt(T);
    op.alpha = 0.5 * (beta * beta + 1.0) * std::sqrt(T);
    return op;
}

Vec2 vq_update(const Vec2& vq, const Vec2& g_tilde) {
    return {std::max(-g_tilde[0], vq[0] + g_tilde[0]),
            std::max(-g_tilde[1], vq[1] + g_tilde[1])};
}

std::array<Vec2, 2> g_tilde_grad_rows(const PowerParams& pp, double gamma) {
    return {Vec2{gamma * -pp.bits_per_cycle, 0.0},
            Vec2{gamma * pp.effective_fraction * pp.bits_per_cycle, gamma * -1.0}};
}

Vec2 direction(const Vec2& grad, const Vec2& vq, const Vec2& g_tilde,
               const std::array<Vec2, 2>& g_grad_rows) {
    Vec2 d = grad;
    for (int i = 0; i < 2; ++i) {
        const double coef = vq[i] + g_tilde[i];
        d[0] += coef * g_grad_rows[i][0];
        d[1] += coef * g_grad_rows[i][1];
    }
    return d;
}

Decision project_box(double cpu_freq, double tx_rate, const SlotContext& ctx,
                     const PowerParams& pp) {
    const double r_max = ctx.contact ? pp.rate_max : 0.0;
    return {std::clamp(cpu_freq, 0.0, pp.cpu_max), std::clamp(tx_rate, 0.0, r_max)};
}

Decision oco_step(const LearnerState& st, const OcoParams& op, const SlotContext& ctx,
                  const PowerParams& pp) {
    Vec2 grad = op.literal_mode ? Vec2{0.0, 0.0} : st.grad_prev;
    if (!op.literal_mode && op.grad_clip > 0.0) {
        const double norm = std::hypot(grad[0], grad[1]);
        if (norm > op.grad_clip) {
            grad[0] *= op.grad_clip / norm;
            grad[1] *= op.grad_clip / norm;
        }
    }
    const Vec2 d = direction(grad, st.vq, st.g_prev, g_tilde_grad_rows(pp, op.gamma));
    const double step = 1.0 / (2.0 * op.alpha);
    return project_box(st.x_prev.cpu_freq - step * d[0], st.x_prev.tx_rate - step * d[1],
                       ctx, pp);
}

Decision reference_min(const LearnerState& st, const OcoParams& op, const SlotContext& ctx,
                       const PowerParams& pp, int grid) {
    if (grid < 2) throw std::invalid_argument("reference_min: grid must be >= 2");
    const Vec2 coef = {st.vq[0] + st.g_prev[0], st.vq[1] + st.g_prev[1]};
    const Vec2 grad = op.literal_mode ? Vec2{0.0, 0.0} : st.grad_prev;
    const double r_max = ctx.contact ? pp.rate_max : 0.0;
    const int nr = ctx.contact ? grid : 1;

    Decision best{};
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const double f = pp.cpu_max * i / (grid - 1);
        const double df = f - st.x_prev.cpu_freq;
        // g~ evaluated with the current slot's frame rate; its constant part
        // shifts every candidate equally and cannot move the argmin.
        const double g1 = op.gamma * (pp.frame_bits * ctx.frame_rate - pp.bits_per_cycle * f);
        for (int j = 0; j < nr; ++j) {
            const double r = nr == 1 ? 0.0 : r_max * j / (grid - 1);
            const double dr = r - st.x_prev.tx_rate;
            const double g2 =
                op.gamma * (pp.effective_fraction * pp.bits_per_cycle * f - r);
            const double val = grad[0] * df + grad[1] * dr + coef[0] * g1 + coef[1] * g2 +
                               op.alpha * (df * df + dr * dr);
            if (val < best_val) {
                best_val = val;
                best = {f, r};
            }
        }
    }
    return best;
}

TheoryBounds theory_bounds(const PowerParams& pp, double frame_rate_hi) {
    TheoryBounds b;
    b.box_diameter = std::hypot(pp.cpu_max, pp.rate_max);
    for (double f : {0.0, pp.cpu_max})
        for (double r : {0.0, pp.rate_max})
            for (double fs : {0.0, frame_rate_hi}) {
                const double g1 = pp.frame_bits * fs - pp.bits_per_cycle * f;
                const double g2 = pp.effective_fraction * pp.bits_per_cycle * f - r;
                b.g_norm_max = std::max(b.g_norm_max, std::hypot(g1, g2));
                b.g1_abs_max = std::max(b.g1_abs_max, std::abs(g1));
                b.g2_abs_max = std::max(b.g2_abs_max, std::abs(g2));
            }
    return b;
}

double objective_grad_bound(const PowerParams& pp, double snr_lo) {
    const double gf = 3.0 * pp.capacitance_coeff * pp.cpu_max * pp.cpu_max * pp.slot_seconds;
    const double gr = std::log(2.0) / pp.bandwidth * std::exp2(pp.rate_max / pp.bandwidth) /
                      std::max(snr_lo, 1e-12) * pp.slot_seconds;
    return std::hypot(gf, gr);
}

}  // namespace leosched
