#pragma once

#include <array>
#include <cstdint>

#include "leosched/dynamics.hpp"

namespace leosched {

using Vec2 = std::array<double, 2>;

/// Learner constants. The update step is 1/(2*alpha); gamma scales the
/// constraint functions (g~ = gamma*g); beta is the assumed Lipschitz
/// constant of g; eta only appears in the alpha >= (gamma^2 beta^2 + eta)/2
/// validity condition.
struct OcoParams {
    double alpha = 0.0;
    double gamma = 0.0;
    double beta = 14.0;
    double eta = 0.0;
    double grad_clip = 0.0;     // objective-gradient norm cap; <=0 disables
    bool literal_mode = false;  // carry the discharge amount as an explicit coordinate
};

/// Theory schedule: gamma = T^(1/4), eta = sqrt(T), alpha = (beta^2+1)sqrt(T)/2.
OcoParams default_oco_params(double beta, std::int64_t horizon);

/// Everything the learner remembers between two visits of one window.
struct LearnerState {
    Decision x_prev{};
    double e_out_prev = 0.0;        // literal mode only
    Vec2 vq{0.0, 0.0};              // virtual queues, bit/s units
    Vec2 g_prev{0.0, 0.0};          // gamma-scaled constraints at x_prev
    Vec2 grad_prev{0.0, 0.0};       // objective subgradient at x_prev
};

/// Virtual-queue update: componentwise max(-g~_i, vq_i + g~_i).
/// Guarantees vq >= 0 and vq + g~ >= 0 afterwards.
Vec2 vq_update(const Vec2& vq, const Vec2& g_tilde);

/// Constant rows of grad(g~): gamma*(-kappa, 0) and gamma*(rho*kappa, -1).
std::array<Vec2, 2> g_tilde_grad_rows(const PowerParams& pp, double gamma);

/// Drift-plus-penalty direction d = grad + sum_i (vq_i + g~_i) grad g~_i.
Vec2 direction(const Vec2& grad, const Vec2& vq, const Vec2& g_tilde,
               const std::array<Vec2, 2>& g_grad_rows);

/// Componentwise clamp onto the per-slot box: cpu in [0, cpu_max],
/// rate in [0, rate_max * contact]. Idempotent.
Decision project_box(double cpu_freq, double tx_rate, const SlotContext& ctx,
                     const PowerParams& pp);

/// One learner update: project_box(x_prev - d/(2 alpha)).
Decision oco_step(const LearnerState& st, const OcoParams& op, const SlotContext& ctx,
                  const PowerParams& pp);

/// Grid minimiser of the full per-slot subproblem
///   grad'(x - x_prev) + (vq + g~(x_prev))' g~(x) + alpha ||x - x_prev||^2
/// over the box. Test oracle for oco_step; not used by the scheduler.
Decision reference_min(const LearnerState& st, const OcoParams& op, const SlotContext& ctx,
                       const PowerParams& pp, int grid = 401);

/// Bounds appearing in the regret/violation statements; reported only.
struct TheoryBounds {
    double box_diameter = 0.0;  // max ||x - y|| over the contact box
    double g_norm_max = 0.0;    // max ||g(x)|| over box corners and frame-rate range
    double g1_abs_max = 0.0;
    double g2_abs_max = 0.0;
};
TheoryBounds theory_bounds(const PowerParams& pp, double frame_rate_hi);

/// Largest possible objective-subgradient norm on the box, for the clip.
double objective_grad_bound(const PowerParams& pp, double snr_lo);

}  // namespace leosched
