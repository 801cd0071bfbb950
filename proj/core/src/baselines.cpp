#include "leosched/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace leosched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-slot constants the solver touches in its inner loop.
struct SlotData {
    double harvest;
    double snr;
    double demand;     // D * f_sen, bit/s
    double base;       // sensing + base load, J
    bool contact;
};

std::vector<SlotData> slot_data(const std::vector<SlotContext>& trace, const PowerParams& pp) {
    std::vector<SlotData> s(trace.size());
    const double e_sen = sensing_energy(pp);
    for (size_t i = 0; i < trace.size(); ++i)
        s[i] = {trace[i].harvest_energy, trace[i].snr,
                pp.frame_bits * trace[i].frame_rate, e_sen + trace[i].base_load,
                trace[i].contact};
    return s;
}

double slot_cost(const SlotData& sd, double f, double r, const PowerParams& pp) {
    const double cons = sd.base + pp.capacitance_coeff * f * f * f * pp.slot_seconds +
                        (std::exp2(r / pp.bandwidth) - 1.0) / sd.snr * pp.slot_seconds;
    return std::max(0.0, cons - sd.harvest);
}

// One decision variable per group of slots. The group's rate is realized
// only on its contact slots; a group with none cannot transmit at all.
struct Group {
    std::vector<int> slots;
    std::vector<int> contact_slots;
    double v_cap = 0.0;  // unit coords
};

struct Candidate {
    std::vector<double> u, v;  // per group, unit coords
    double objective = kInf;
    double res1 = kInf, res2 = kInf;  // positive parts of the terminal sums, bit/s
};

// Smaller is better: clear the constraints first, then spend less energy.
bool better(const Candidate& a, const Candidate& b, double res_tol) {
    const double ra = std::max(a.res1, a.res2), rb = std::max(b.res1, b.res2);
    const bool fa = ra <= res_tol, fb = rb <= res_tol;
    if (fa != fb) return fa;
    if (!fa) return ra < rb;
    return a.objective < b.objective;
}

class GroupSolver {
public:
    GroupSolver(const std::vector<SlotContext>& trace, const PowerParams& pp,
                std::vector<Group> groups, const SolverOptions& opts)
        : pp_(pp), opts_(opts), sd_(slot_data(trace, pp)), groups_(std::move(groups)) {
        for (const SlotData& s : sd_) w1_ += s.demand;
        scale_ = std::max(pp.bits_per_cycle * pp.cpu_max, 1.0);
        for (Group& g : groups_) {
            g.contact_slots.clear();
            for (int t : g.slots)
                if (sd_[static_cast<size_t>(t)].contact) g.contact_slots.push_back(t);
            g.v_cap = g.contact_slots.empty() ? 0.0 : 1.0;
        }
    }

    Candidate solve() {
        const size_t G = groups_.size();
        std::vector<double> u(G, 0.0), v(G, 0.0);
        std::vector<double> du(G), dv(G);
        Candidate best;
        double lambda1 = 0.0, lambda2 = 0.0, weight = 1.0;
        long iter = 0;
        for (int round = 0; round < opts_.outer_rounds; ++round) {
            for (int it = 0; it < opts_.max_iters; ++it) {
                ++iter;
                const auto [a1, a2] = aggregates(u, v);
                const double c1 = std::max(0.0, lambda1 + weight * a1 / scale_);
                const double c2 = std::max(0.0, lambda2 + weight * a2 / scale_);
                double dmax = 0.0;
                for (size_t g = 0; g < G; ++g) {
                    double gu = 0.0, gv = 0.0;
                    const double f = u[g] * pp_.cpu_max;
                    for (int t : groups_[g].slots) {
                        const double r =
                            sd_[t].contact ? v[g] * pp_.rate_max : 0.0;
                        if (slot_cost(sd_[t], f, r, pp_) > 0.0) {
                            gu += 3.0 * pp_.capacitance_coeff * f * f * pp_.slot_seconds *
                                  pp_.cpu_max;
                            if (sd_[t].contact)
                                gv += std::log(2.0) / pp_.bandwidth *
                                      std::exp2(r / pp_.bandwidth) / sd_[t].snr *
                                      pp_.slot_seconds * pp_.rate_max;
                        }
                    }
                    const auto n = static_cast<double>(groups_[g].slots.size());
                    const auto nc = static_cast<double>(groups_[g].contact_slots.size());
                    gu += n * (-c1 * pp_.bits_per_cycle * pp_.cpu_max +
                               c2 * pp_.effective_fraction * pp_.bits_per_cycle *
                                   pp_.cpu_max) / scale_;
                    gv += nc * (-c2 * pp_.rate_max) / scale_;
                    du[g] = gu / std::max(n, 1.0);
                    dv[g] = gv / std::max(nc, 1.0);
                    dmax = std::max({dmax, std::abs(du[g]), std::abs(dv[g])});
                }
                if (dmax > 0.0) {
                    // normalised subgradient: the largest coordinate moves
                    // step_c/sqrt(iter) of its box
                    const double step =
                        opts_.step_c / std::sqrt(static_cast<double>(iter)) / dmax;
                    for (size_t g = 0; g < G; ++g) {
                        u[g] = std::clamp(u[g] - step * du[g], 0.0, 1.0);
                        v[g] = std::clamp(v[g] - step * dv[g], 0.0, groups_[g].v_cap);
                    }
                }
                if (iter % 200 == 0) consider(u, v, best);
            }
            const auto [a1, a2] = aggregates(u, v);
            lambda1 = std::max(0.0, lambda1 + weight * a1 / scale_);
            lambda2 = std::max(0.0, lambda2 + weight * a2 / scale_);
            weight *= opts_.penalty_growth;
            consider(u, v, best);
        }
        consider(u, v, best);
        return best;
    }

    double res_tol() const { return opts_.tolerance * std::max(w1_, 1.0); }

    std::vector<Decision> expand(const Candidate& c, std::vector<Decision>& per_group,
                                 size_t horizon) const {
        per_group.resize(groups_.size());
        std::vector<Decision> dec(horizon);
        for (size_t g = 0; g < groups_.size(); ++g) {
            per_group[g] = {c.u[g] * pp_.cpu_max, c.v[g] * pp_.rate_max};
            for (int t : groups_[g].slots)
                dec[static_cast<size_t>(t)] = {per_group[g].cpu_freq,
                                               sd_[t].contact ? per_group[g].tx_rate : 0.0};
        }
        return dec;
    }

private:
    // Terminal constraint sums in bit/s: (sensed - processed, processed - sent).
    std::pair<double, double> aggregates(const std::vector<double>& u,
                                         const std::vector<double>& v) const {
        double work = 0.0, sent = 0.0;
        for (size_t g = 0; g < groups_.size(); ++g) {
            work += static_cast<double>(groups_[g].slots.size()) * pp_.bits_per_cycle *
                    u[g] * pp_.cpu_max;
            sent += static_cast<double>(groups_[g].contact_slots.size()) * v[g] *
                    pp_.rate_max;
        }
        return {w1_ - work, pp_.effective_fraction * work - sent};
    }

    double objective(const std::vector<double>& u, const std::vector<double>& v) const {
        double total = 0.0;
        for (size_t g = 0; g < groups_.size(); ++g)
            for (int t : groups_[g].slots)
                total += slot_cost(sd_[t], u[g] * pp_.cpu_max,
                                   sd_[t].contact ? v[g] * pp_.rate_max : 0.0, pp_);
        return total;
    }

    void consider(std::vector<double> u, std::vector<double> v, Candidate& best) const {
        repair(u, v);
        Candidate c;
        const auto [a1, a2] = aggregates(u, v);
        c.res1 = std::max(0.0, a1);
        c.res2 = std::max(0.0, a2);
        c.objective = objective(u, v);
        c.u = std::move(u);
        c.v = std::move(v);
        if (better(c, best, res_tol())) best = c;
    }

    // Free work capacity of a slot: the frequency at which discharge starts,
    // given its current rate.
    double free_cpu(const SlotData& sd, double r) const {
        const double slack = sd.harvest - sd.base -
                             (std::exp2(r / pp_.bandwidth) - 1.0) / sd.snr * pp_.slot_seconds;
        if (slack <= 0.0) return 0.0;
        return std::cbrt(slack / (pp_.capacitance_coeff * pp_.slot_seconds));
    }

    double free_rate(const SlotData& sd, double f) const {
        const double slack = sd.harvest - sd.base -
                             pp_.capacitance_coeff * f * f * f * pp_.slot_seconds;
        if (slack <= 0.0) return 0.0;
        return pp_.bandwidth * std::log2(1.0 + slack / pp_.slot_seconds * sd.snr);
    }

    // Raises group CPU levels to meet the aggregate work requirement at a
    // uniform marginal price, free (harvest-covered) capacity first.
    void repair(std::vector<double>& u, std::vector<double>& v) const {
        auto slot_rate = [&](int t, size_t g) {
            return sd_[t].contact ? v[g] * pp_.rate_max : 0.0;
        };
        auto group_cpu_at_price = [&](size_t g, double price, double floor_u) {
            // Largest f with the group's summed marginal cost <= price * |g|.
            const auto& slots = groups_[g].slots;
            if (slots.size() == 1) {  // closed form: free capacity, then the price point
                const double f_free = free_cpu(sd_[slots[0]], slot_rate(slots[0], g));
                const double f_price = price > 0.0
                                           ? std::sqrt(price / (3.0 * pp_.capacitance_coeff *
                                                                pp_.slot_seconds))
                                           : 0.0;
                const double f = std::min(pp_.cpu_max, std::max(f_free, f_price));
                return std::max(floor_u, f / pp_.cpu_max);
            }
            double lo = floor_u * pp_.cpu_max, hi = pp_.cpu_max;
            auto affordable = [&](double f) {
                double mc = 0.0;
                for (int t : slots)
                    if (f > free_cpu(sd_[t], slot_rate(t, g)))
                        mc += 3.0 * pp_.capacitance_coeff * f * f * pp_.slot_seconds;
                return mc <= price * static_cast<double>(slots.size());
            };
            if (!affordable(lo)) return floor_u;
            for (int i = 0; i < 40; ++i) {
                const double mid = 0.5 * (lo + hi);
                (affordable(mid) ? lo : hi) = mid;
            }
            return lo / pp_.cpu_max;
        };
        auto work_at_price = [&](double price, const std::vector<double>& floor_u,
                                 std::vector<double>& out) {
            double work = 0.0;
            for (size_t g = 0; g < groups_.size(); ++g) {
                out[g] = std::max(floor_u[g], group_cpu_at_price(g, price, floor_u[g]));
                work += static_cast<double>(groups_[g].slots.size()) * pp_.bits_per_cycle *
                        out[g] * pp_.cpu_max;
            }
            return work;
        };
        if (aggregates(u, v).first > 0.0) {
            const std::vector<double> floor_u = u;
            std::vector<double> cand(u.size());
            const double pmax =
                6.0 * pp_.capacitance_coeff * pp_.cpu_max * pp_.cpu_max * pp_.slot_seconds;
            if (work_at_price(pmax, floor_u, cand) < w1_) {
                u = cand;  // capacity-bound; leave the residual standing
            } else {
                double lo = 0.0, hi = pmax;
                for (int i = 0; i < 60; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (work_at_price(mid, floor_u, cand) >= w1_ ? hi : lo) = mid;
                }
                work_at_price(hi, floor_u, cand);
                u = cand;
            }
        }

        // Then raise rates the same way to cover rho * (total processed).
        auto group_rate_at_price = [&](size_t g, double price, double floor_v) {
            const double cap = groups_[g].v_cap * pp_.rate_max;
            if (cap <= floor_v * pp_.rate_max) return floor_v;
            const auto& slots = groups_[g].contact_slots;
            if (slots.size() == 1) {
                const double r_free = free_rate(sd_[slots[0]], u[g] * pp_.cpu_max);
                double r_price = 0.0;
                if (price > 0.0) {
                    const double lvl = price * pp_.bandwidth * sd_[slots[0]].snr /
                                       (std::log(2.0) * pp_.slot_seconds);
                    if (lvl > 1.0) r_price = pp_.bandwidth * std::log2(lvl);
                }
                const double r = std::min(cap, std::max(r_free, r_price));
                return std::max(floor_v, r / pp_.rate_max);
            }
            double lo = floor_v * pp_.rate_max, hi = cap;
            auto affordable = [&](double r) {
                double mc = 0.0;
                for (int t : slots)
                    if (r > free_rate(sd_[t], u[g] * pp_.cpu_max))
                        mc += std::log(2.0) / pp_.bandwidth * std::exp2(r / pp_.bandwidth) /
                              sd_[t].snr * pp_.slot_seconds;
                return mc <= price * static_cast<double>(slots.size());
            };
            if (!affordable(lo)) return floor_v;
            for (int i = 0; i < 40; ++i) {
                const double mid = 0.5 * (lo + hi);
                (affordable(mid) ? lo : hi) = mid;
            }
            return lo / pp_.rate_max;
        };
        const double need = [&] {
            double work = 0.0;
            for (size_t g = 0; g < groups_.size(); ++g)
                work += static_cast<double>(groups_[g].slots.size()) * pp_.bits_per_cycle *
                        u[g] * pp_.cpu_max;
            return pp_.effective_fraction * work;
        }();
        auto sent_at_price = [&](double price, const std::vector<double>& floor_v,
                                 std::vector<double>& out) {
            double sent = 0.0;
            for (size_t g = 0; g < groups_.size(); ++g) {
                out[g] = std::max(floor_v[g], group_rate_at_price(g, price, floor_v[g]));
                sent += static_cast<double>(groups_[g].contact_slots.size()) * out[g] *
                        pp_.rate_max;
            }
            return sent;
        };
        if (aggregates(u, v).second > 0.0) {
            const std::vector<double> floor_v = v;
            std::vector<double> cand(v.size());
            const double qmax = std::log(2.0) / pp_.bandwidth *
                                std::exp2(pp_.rate_max / pp_.bandwidth) * pp_.slot_seconds *
                                2.0;  // marginal at the box edge, snr 0.5
            if (sent_at_price(qmax, floor_v, cand) < need) {
                v = cand;
            } else {
                double lo = 0.0, hi = qmax;
                for (int i = 0; i < 60; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (sent_at_price(mid, floor_v, cand) >= need ? hi : lo) = mid;
                }
                sent_at_price(hi, floor_v, cand);
                v = cand;
            }
        }
    }

    const PowerParams pp_;
    const SolverOptions opts_;
    std::vector<SlotData> sd_;
    std::vector<Group> groups_;
    double w1_ = 0.0;
    double scale_ = 1.0;
};

OfflineSolution finish(const std::vector<SlotContext>& trace, const PowerParams& pp,
                       GroupSolver& solver, const Candidate& best, bool pattern) {
    OfflineSolution sol;
    std::vector<Decision> per_group;
    sol.decisions = solver.expand(best, per_group, trace.size());
    if (pattern) sol.window_decisions = std::move(per_group);
    sol.objective = 0.0;
    for (size_t i = 0; i < trace.size(); ++i)
        sol.objective += discharge_objective(sol.decisions[i], trace[i], pp).value;
    double a1 = 0.0, a2 = 0.0;
    for (size_t i = 0; i < trace.size(); ++i) {
        const auto [g1, g2] = constraint_values(sol.decisions[i], trace[i], pp);
        a1 += g1;
        a2 += g2;
    }
    sol.residual_g1 = a1;
    sol.residual_g2 = a2;
    sol.converged = std::max(a1, a2) <= solver.res_tol();
    return sol;
}

}  // namespace

RunRecord greedy_schedule(const std::vector<SlotContext>& trace, const PowerParams& pp,
                          GreedyReport* report) {
    std::vector<Decision> dec(trace.size());
    double sum1 = 0.0;  // running sum of (D f_sen - kappa f), bit/s
    double sum2 = 0.0;  // running sum of (rho kappa f - R), bit/s
    for (size_t i = 0; i < trace.size(); ++i) {
        const SlotContext& ctx = trace[i];
        const double demand = sum1 + pp.frame_bits * ctx.frame_rate;
        const double f = pp.bits_per_cycle > 0.0
                             ? std::clamp(demand / pp.bits_per_cycle, 0.0, pp.cpu_max)
                             : 0.0;
        sum1 = sum1 + pp.frame_bits * ctx.frame_rate - pp.bits_per_cycle * f;
        const double backlog = sum2 + pp.effective_fraction * pp.bits_per_cycle * f;
        const double r = ctx.contact ? std::clamp(backlog, 0.0, pp.rate_max) : 0.0;
        sum2 = backlog - r;
        dec[i] = {f, r};
    }
    if (report) {
        report->residual_g1 = sum1;
        report->residual_g2 = sum2;
        report->feasible = sum1 <= 1e-6 && sum2 <= 1e-6;
    }
    RunRecord rec = simulate_decisions(trace, dec, pp, {}, "greedy");
    return rec;
}

OfflineSolution solve_offline_dynamic(const std::vector<SlotContext>& trace,
                                      const PowerParams& pp, const SolverOptions& opts) {
    if (trace.empty()) throw std::invalid_argument("solve_offline_dynamic: empty trace");
    std::vector<Group> groups(trace.size());
    for (size_t i = 0; i < trace.size(); ++i) groups[i].slots = {static_cast<int>(i)};
    GroupSolver solver(trace, pp, std::move(groups), opts);
    const Candidate best = solver.solve();
    return finish(trace, pp, solver, best, false);
}

OfflineSolution solve_offline_pattern(const std::vector<SlotContext>& trace,
                                      const PowerParams& pp,
                                      const std::vector<int>& window_of_slot,
                                      int window_count, const SolverOptions& opts) {
    if (trace.empty()) throw std::invalid_argument("solve_offline_pattern: empty trace");
    if (window_of_slot.size() != trace.size())
        throw std::invalid_argument("solve_offline_pattern: window assignment length");
    std::vector<Group> groups(static_cast<size_t>(window_count));
    for (size_t i = 0; i < trace.size(); ++i) {
        const int k = window_of_slot[i];
        if (k < 0 || k >= window_count)
            throw std::invalid_argument("solve_offline_pattern: window id out of range");
        groups[static_cast<size_t>(k)].slots.push_back(static_cast<int>(i));
    }
    GroupSolver solver(trace, pp, std::move(groups), opts);
    const Candidate best = solver.solve();
    return finish(trace, pp, solver, best, true);
}

OfflineSolution brute_force_oracle(const std::vector<SlotContext>& trace,
                                   const PowerParams& pp, int grid_levels) {
    const auto T = trace.size();
    if (T == 0 || T > 8) throw std::invalid_argument("brute_force_oracle: need 1 <= T <= 8");
    if (grid_levels < 2 || grid_levels > 25)
        throw std::invalid_argument("brute_force_oracle: need 2 <= grid_levels <= 25");

    const auto sd = slot_data(trace, pp);
    double w1 = 0.0;
    for (const auto& s : sd) w1 += s.demand;
    const int G = grid_levels;
    const int max_sum = static_cast<int>(T) * (G - 1);
    const int S = max_sum + 1;
    const double f_unit = pp.cpu_max / (G - 1);
    const double r_unit = pp.rate_max / (G - 1);

    // cost[su][sv]: cheapest prefix with total CPU level su and rate level sv.
    std::vector<double> cost(static_cast<size_t>(S) * S, kInf), next(cost.size(), kInf);
    std::vector<std::vector<std::uint16_t>> choice(
        T, std::vector<std::uint16_t>(static_cast<size_t>(S) * S, 0xffff));
    cost[0] = 0.0;

    for (size_t t = 0; t < T; ++t) {
        std::fill(next.begin(), next.end(), kInf);
        const int rv_levels = sd[t].contact ? G : 1;
        // Slot costs for every lattice decision, reused across states.
        std::vector<double> phi(static_cast<size_t>(G) * rv_levels);
        for (int uf = 0; uf < G; ++uf)
            for (int vr = 0; vr < rv_levels; ++vr)
                phi[static_cast<size_t>(uf) * rv_levels + vr] =
                    slot_cost(sd[t], uf * f_unit, vr * r_unit, pp);
        const int reach = static_cast<int>(t) * (G - 1);
        for (int su = 0; su <= reach; ++su)
            for (int sv = 0; sv <= reach; ++sv) {
                const double base = cost[static_cast<size_t>(su) * S + sv];
                if (base == kInf) continue;
                for (int uf = 0; uf < G; ++uf)
                    for (int vr = 0; vr < rv_levels; ++vr) {
                        const size_t idx =
                            static_cast<size_t>(su + uf) * S + (sv + vr);
                        const double c =
                            base + phi[static_cast<size_t>(uf) * rv_levels + vr];
                        if (c < next[idx]) {
                            next[idx] = c;
                            choice[t][idx] = static_cast<std::uint16_t>(uf * G + vr);
                        }
                    }
            }
        cost.swap(next);
    }

    // Terminal filter: enough work done, and enough of it sent down.
    double best_cost = kInf;
    int best_su = -1, best_sv = -1;
    for (int su = 0; su <= max_sum; ++su)
        for (int sv = 0; sv <= max_sum; ++sv) {
            const double c = cost[static_cast<size_t>(su) * S + sv];
            if (c >= best_cost) continue;
            const double work = pp.bits_per_cycle * su * f_unit;
            const double sent = sv * r_unit;
            if (work + 1e-9 >= w1 && pp.effective_fraction * work <= sent + 1e-9) {
                best_cost = c;
                best_su = su;
                best_sv = sv;
            }
        }

    OfflineSolution sol;
    if (best_su < 0) {
        sol.converged = false;
        sol.decisions.assign(T, Decision{});
        sol.objective = kInf;
        return sol;
    }
    sol.decisions.resize(T);
    int su = best_su, sv = best_sv;
    for (size_t t = T; t-- > 0;) {
        const std::uint16_t ch = choice[t][static_cast<size_t>(su) * S + sv];
        const int uf = ch / G, vr = ch % G;
        sol.decisions[t] = {uf * f_unit, vr * r_unit};
        su -= uf;
        sv -= vr;
    }
    sol.objective = best_cost;
    double a1 = 0.0, a2 = 0.0;
    for (size_t i = 0; i < T; ++i) {
        const auto [g1, g2] = constraint_values(sol.decisions[i], trace[i], pp);
        a1 += g1;
        a2 += g2;
    }
    sol.residual_g1 = a1;
    sol.residual_g2 = a2;
    return sol;
}

}  // namespace leosched
