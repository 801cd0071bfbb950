#include "leosched/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace leosched {

std::vector<double> slot_objectives(const std::vector<SlotContext>& trace,
                                    const std::vector<Decision>& decisions,
                                    const PowerParams& pp) {
    if (trace.size() != decisions.size())
        throw std::invalid_argument("slot_objectives: decision count != trace length");
    std::vector<double> obj(trace.size());
    for (size_t i = 0; i < trace.size(); ++i)
        obj[i] = discharge_objective(decisions[i], trace[i], pp).value;
    return obj;
}

RegretSeries regret(const RunRecord& run, const std::vector<double>& bench) {
    if (bench.size() != run.rows.size())
        throw std::invalid_argument("regret: benchmark length != run length");
    RegretSeries s = violations(run);
    s.regret.resize(run.rows.size());
    double acc = 0.0;
    for (size_t i = 0; i < run.rows.size(); ++i) {
        acc += run.rows[i].e_out - bench[i];
        s.regret[i] = acc;
    }
    return s;
}

RegretSeries violations(const RunRecord& run) {
    RegretSeries s;
    s.violation_g1.resize(run.rows.size());
    s.violation_g2.resize(run.rows.size());
    double a1 = 0.0, a2 = 0.0;
    for (size_t i = 0; i < run.rows.size(); ++i) {
        a1 += run.rows[i].g1;
        a2 += run.rows[i].g2;
        s.violation_g1[i] = a1;
        s.violation_g2[i] = a2;
    }
    return s;
}

DodStats dod_stats(const RunRecord& run) {
    if (run.trace.size() != run.rows.size())
        throw std::invalid_argument("dod_stats: record is missing its trace");
    DodStats d;
    d.battery_min = run.rows.empty() ? 0.0 : run.rows.front().battery;
    double span = 0.0;
    bool in_eclipse = false;
    for (size_t i = 0; i < run.rows.size(); ++i) {
        d.total += run.rows[i].e_out;
        d.battery_min = std::min(d.battery_min, run.rows[i].battery);
        if (!run.trace[i].in_light) {
            span = in_eclipse ? span + run.rows[i].e_out : run.rows[i].e_out;
            in_eclipse = true;
            d.max_eclipse_depth = std::max(d.max_eclipse_depth, span);
        } else {
            in_eclipse = false;
        }
    }
    return d;
}

}  // namespace leosched
