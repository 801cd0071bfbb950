#include "leosched/record.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace leosched {

RunRecord simulate_decisions(const std::vector<SlotContext>& trace,
                             const std::vector<Decision>& decisions,
                             const PowerParams& pp,
                             const std::vector<int>& window_of_slot,
                             std::string policy) {
    if (decisions.size() != trace.size())
        throw std::invalid_argument("simulate_decisions: decision count != trace length");
    RunRecord rec;
    rec.policy = std::move(policy);
    rec.trace = trace;
    rec.rows.reserve(trace.size());

    SatelliteState s;
    s.battery = pp.battery_cap;  // full at mission start
    for (size_t i = 0; i < trace.size(); ++i) {
        const SlotContext& ctx = trace[i];
        const Decision& d = decisions[i];
        const EnergyAccount acct = energy_balance(d, ctx, pp, s.battery);
        const double a_p = processed_amount(s.q_cmp, ctx, d, pp);
        s.battery = battery_step(s.battery, acct, pp);
        const double q_cmp_next = q_cmp_step(s.q_cmp, ctx, d, pp);
        s.q_com = q_com_step(s.q_com, a_p, d, pp);
        s.q_cmp = q_cmp_next;
        const auto [g1, g2] = constraint_values(d, ctx, pp);
        rec.rows.push_back({ctx.t, window_of_slot.empty() ? 0 : window_of_slot[i], d,
                            acct.e_out, acct.e_in, s.battery, s.q_cmp, s.q_com, g1, g2, 0.0,
                            0.0});
    }
    return rec;
}

namespace {

void put(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

}  // namespace

void write_csv(const RunRecord& rec, const std::string& path) {
    std::string body;
    body.reserve(rec.rows.size() * 140 + 256);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char ts[64];
    std::strftime(ts, sizeof ts, "%FT%TZ", std::gmtime(&now));
    body += "# leosched run policy=" + rec.policy + " seed=" + std::to_string(rec.seed) +
            " params=" + std::to_string(rec.params_hash) + " generated=" + ts + "\n";
    body += "t,window_id,cpu_freq,tx_rate,e_out,e_in,battery,q_cmp,q_com,g1,g2,vq1,vq2\n";
    for (const SlotRow& r : rec.rows) {
        body += std::to_string(r.t) + "," + std::to_string(r.window_id) + ",";
        put(body, r.decision.cpu_freq);
        body += ",";
        put(body, r.decision.tx_rate);
        for (double v : {r.e_out, r.e_in, r.battery, r.q_cmp, r.q_com, r.g1, r.g2, r.vq1,
                         r.vq2}) {
            body += ",";
            put(body, v);
        }
        body += "\n";
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << body;
}

}  // namespace leosched
