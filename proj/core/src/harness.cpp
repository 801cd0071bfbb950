#include "leosched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace leosched {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.sweep = {"harvest_peak", {20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130}};
    sync_mirrors(cfg);
    return cfg;
}

void sync_mirrors(ExperimentConfig& cfg) {
    cfg.power.slot_seconds = cfg.env.slot_duration;
    cfg.power.bandwidth = cfg.env.bandwidth;
    cfg.power.frame_bits = cfg.env.frame_size_bits;
}

OcoParams oco_params_for(const ExperimentConfig& cfg) {
    OcoParams op = default_oco_params(cfg.beta, cfg.horizon);
    if (cfg.alpha > 0.0) op.alpha = cfg.alpha;
    if (cfg.gamma > 0.0) op.gamma = cfg.gamma;
    if (cfg.eta > 0.0) op.eta = cfg.eta;
    op.literal_mode = cfg.run_options.literal_mode;
    return op;
}

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw std::runtime_error("config: unknown key '" + where + key + "'");
    }
}

template <typename T>
void get(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void get_range(const json& j, const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2)
        throw std::runtime_error(std::string("config: ") + key + " must be [lo, hi]");
    lo = v[0].get<double>();
    hi = v[1].get<double>();
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: " + std::string(e.what()));
    }

    ExperimentConfig cfg;
    check_keys(j, "", {"environment", "power", "oco", "partition", "horizon", "policies",
                       "seeds", "sweep", "output_dir", "theory_mode", "run_options",
                       "solver"});
    if (j.contains("environment")) {
        const auto& e = j["environment"];
        check_keys(e, "environment.",
                   {"orbit_period_slots", "light_fraction", "harvest_peak_j_per_min",
                    "contact_windows_per_orbit", "contact_window_len", "slot_duration_s",
                    "bandwidth_hz", "snr_range", "frame_rate_range", "frame_size_bits",
                    "base_load_j", "seed"});
        get(e, "orbit_period_slots", cfg.env.orbit_period_slots);
        get(e, "light_fraction", cfg.env.light_fraction);
        get(e, "harvest_peak_j_per_min", cfg.env.harvest_peak);
        get(e, "contact_windows_per_orbit", cfg.env.contact_windows_per_orbit);
        get(e, "contact_window_len", cfg.env.contact_window_len);
        get(e, "slot_duration_s", cfg.env.slot_duration);
        get(e, "bandwidth_hz", cfg.env.bandwidth);
        get_range(e, "snr_range", cfg.env.snr_lo, cfg.env.snr_hi);
        get_range(e, "frame_rate_range", cfg.env.frame_rate_lo, cfg.env.frame_rate_hi);
        get(e, "frame_size_bits", cfg.env.frame_size_bits);
        get(e, "base_load_j", cfg.env.base_load);
        get(e, "seed", cfg.env.seed);
    }
    if (j.contains("power")) {
        const auto& p = j["power"];
        check_keys(p, "power.",
                   {"cam_power_j_per_min", "capacitance_coeff", "bits_per_cycle",
                    "effective_fraction", "cpu_max_hz", "rate_max_bps", "battery_cap_j"});
        get(p, "cam_power_j_per_min", cfg.power.cam_power);
        get(p, "capacitance_coeff", cfg.power.capacitance_coeff);
        get(p, "bits_per_cycle", cfg.power.bits_per_cycle);
        get(p, "effective_fraction", cfg.power.effective_fraction);
        get(p, "cpu_max_hz", cfg.power.cpu_max);
        get(p, "rate_max_bps", cfg.power.rate_max);
        get(p, "battery_cap_j", cfg.power.battery_cap);
    }
    if (j.contains("oco")) {
        const auto& o = j["oco"];
        check_keys(o, "oco.", {"beta", "alpha", "gamma", "eta"});
        get(o, "beta", cfg.beta);
        get(o, "alpha", cfg.alpha);  // omitted or <= 0 derives the theory value
        get(o, "gamma", cfg.gamma);
        get(o, "eta", cfg.eta);
    }
    if (j.contains("partition")) {
        const auto& p = j["partition"];
        check_keys(p, "partition.", {"dims", "levels"});
        get(p, "dims", cfg.partition.dims);
        get(p, "levels", cfg.partition.levels);
    }
    get(j, "horizon", cfg.horizon);
    get(j, "policies", cfg.policies);
    get(j, "seeds", cfg.seeds);
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        check_keys(s, "sweep.", {"param", "values"});
        get(s, "param", cfg.sweep.param);
        get(s, "values", cfg.sweep.values);
    }
    get(j, "output_dir", cfg.output_dir);
    get(j, "theory_mode", cfg.theory_mode);
    if (j.contains("run_options")) {
        const auto& r = j["run_options"];
        check_keys(r, "run_options.", {"init_rule", "vq_scope", "literal_mode"});
        std::string init = "midpoint", scope = "per_window";
        get(r, "init_rule", init);
        get(r, "vq_scope", scope);
        get(r, "literal_mode", cfg.run_options.literal_mode);
        if (init == "midpoint") cfg.run_options.init = InitRule::BoxMidpoint;
        else if (init == "zero") cfg.run_options.init = InitRule::Zero;
        else if (init == "nominal") cfg.run_options.init = InitRule::Nominal;
        else
            throw std::runtime_error(
                "config: run_options.init_rule must be midpoint|zero|nominal");
        if (scope == "per_window") cfg.run_options.vq_scope = VqScope::PerWindow;
        else if (scope == "hybrid") cfg.run_options.vq_scope = VqScope::Hybrid;
        else if (scope == "global") cfg.run_options.vq_scope = VqScope::Global;
        else
            throw std::runtime_error(
                "config: run_options.vq_scope must be per_window|hybrid|global");
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        check_keys(s, "solver.",
                   {"max_iters", "outer_rounds", "penalty_growth", "step_c", "tolerance"});
        get(s, "max_iters", cfg.solver.max_iters);
        get(s, "outer_rounds", cfg.solver.outer_rounds);
        get(s, "penalty_growth", cfg.solver.penalty_growth);
        get(s, "step_c", cfg.solver.step_c);
        get(s, "tolerance", cfg.solver.tolerance);
    }
    sync_mirrors(cfg);
    return cfg;
}

namespace {

using Setter = std::function<void(ExperimentConfig&, double)>;

const std::map<std::string, Setter>& sweep_registry() {
    static const std::map<std::string, Setter> reg = {
        {"harvest_peak", [](auto& c, double v) { c.env.harvest_peak = v; }},
        {"light_fraction", [](auto& c, double v) { c.env.light_fraction = v; }},
        {"orbit_period_slots",
         [](auto& c, double v) { c.env.orbit_period_slots = static_cast<int>(v); }},
        {"contact_windows_per_orbit",
         [](auto& c, double v) { c.env.contact_windows_per_orbit = static_cast<int>(v); }},
        {"contact_window_len",
         [](auto& c, double v) { c.env.contact_window_len = static_cast<int>(v); }},
        {"slot_duration", [](auto& c, double v) { c.env.slot_duration = v; }},
        {"bandwidth", [](auto& c, double v) { c.env.bandwidth = v; }},
        {"snr_lo", [](auto& c, double v) { c.env.snr_lo = v; }},
        {"snr_hi", [](auto& c, double v) { c.env.snr_hi = v; }},
        {"frame_rate_lo", [](auto& c, double v) { c.env.frame_rate_lo = v; }},
        {"frame_rate_hi", [](auto& c, double v) { c.env.frame_rate_hi = v; }},
        {"frame_size_bits", [](auto& c, double v) { c.env.frame_size_bits = v; }},
        {"base_load", [](auto& c, double v) { c.env.base_load = v; }},
        {"cam_power", [](auto& c, double v) { c.power.cam_power = v; }},
        {"capacitance_coeff", [](auto& c, double v) { c.power.capacitance_coeff = v; }},
        {"bits_per_cycle", [](auto& c, double v) { c.power.bits_per_cycle = v; }},
        {"effective_fraction", [](auto& c, double v) { c.power.effective_fraction = v; }},
        {"cpu_max", [](auto& c, double v) { c.power.cpu_max = v; }},
        {"rate_max", [](auto& c, double v) { c.power.rate_max = v; }},
        {"battery_cap", [](auto& c, double v) { c.power.battery_cap = v; }},
        {"beta", [](auto& c, double v) { c.beta = v; }},
        {"alpha", [](auto& c, double v) { c.alpha = v; }},
        {"gamma", [](auto& c, double v) { c.gamma = v; }},
        {"eta", [](auto& c, double v) { c.eta = v; }},
        {"levels", [](auto& c, double v) { c.partition.levels = static_cast<int>(v); }},
        {"horizon", [](auto& c, double v) { c.horizon = static_cast<std::int64_t>(v); }},
    };
    return reg;
}

}  // namespace

std::vector<std::string> sweepable_params() {
    std::vector<std::string> names;
    for (const auto& [k, _] : sweep_registry()) names.push_back(k);
    return names;
}

void apply_sweep_value(ExperimentConfig& cfg, const std::string& param, double value) {
    const auto& reg = sweep_registry();
    const auto it = reg.find(param);
    if (it == reg.end())
        throw std::invalid_argument("sweep: unknown parameter '" + param + "'");
    it->second(cfg, value);
    sync_mirrors(cfg);
}

ValidationResult validate_config(const ExperimentConfig& cfg) {
    ValidationResult r;
    try {
        validate(cfg.env);
    } catch (const std::exception& e) {
        r.errors.emplace_back(e.what());
    }
    try {
        validate(cfg.power);
    } catch (const std::exception& e) {
        r.errors.emplace_back(e.what());
    }
    if (cfg.horizon < 1) r.errors.emplace_back("horizon: must be >= 1");
    if (cfg.partition.levels < 1) r.errors.emplace_back("partition.levels: must be >= 1");
    if (cfg.partition.dims != 2)
        r.errors.emplace_back(
            "partition.dims: the pattern features are the 2 light/contact indicators");
    if (cfg.beta < 0) r.errors.emplace_back("oco.beta: must be >= 0");
    if (cfg.seeds.empty()) r.errors.emplace_back("seeds: need at least one seed");
    if (cfg.policies.empty()) r.errors.emplace_back("policies: need at least one policy");
    for (const auto& p : cfg.policies)
        if (p != "oco" && p != "greedy" && p != "pattern_opt" && p != "dynamic_opt")
            r.errors.emplace_back("policies: unknown policy '" + p + "'");
    if (!cfg.sweep.param.empty()) {
        const auto& reg = sweep_registry();
        if (reg.find(cfg.sweep.param) == reg.end())
            r.errors.emplace_back("sweep.param: unknown parameter '" + cfg.sweep.param + "'");
        if (cfg.sweep.values.empty())
            r.errors.emplace_back("sweep.values: need at least one value");
    }
    if (cfg.solver.max_iters < 1) r.errors.emplace_back("solver.max_iters: must be >= 1");
    if (cfg.solver.outer_rounds < 1) r.errors.emplace_back("solver.outer_rounds: must be >= 1");
    if (!(cfg.solver.tolerance > 0)) r.errors.emplace_back("solver.tolerance: must be > 0");
    if (cfg.output_dir.empty()) r.errors.emplace_back("output_dir: must not be empty");

    if (cfg.theory_mode && r.errors.empty()) {
        const OcoParams op = oco_params_for(cfg);
        const double bound = 0.5 * (op.gamma * op.gamma * op.beta * op.beta + op.eta);
        if (op.alpha < bound * (1.0 - 1e-12)) {
            std::ostringstream os;
            os << "oco.alpha: " << op.alpha << " is below (gamma^2 beta^2 + eta)/2 = "
               << bound << "; the regret/violation guarantee does not apply";
            r.warnings.push_back(os.str());
        }
    }
    return r;
}

std::uint64_t params_hash(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << cfg.env.orbit_period_slots << '|' << cfg.env.light_fraction << '|'
       << cfg.env.harvest_peak << '|' << cfg.env.contact_windows_per_orbit << '|'
       << cfg.env.contact_window_len << '|' << cfg.env.slot_duration << '|'
       << cfg.env.bandwidth << '|' << cfg.env.snr_lo << '|' << cfg.env.snr_hi << '|'
       << cfg.env.frame_rate_lo << '|' << cfg.env.frame_rate_hi << '|'
       << cfg.env.frame_size_bits << '|' << cfg.env.base_load << '|' << cfg.power.cam_power
       << '|' << cfg.power.capacitance_coeff << '|' << cfg.power.bits_per_cycle << '|'
       << cfg.power.effective_fraction << '|' << cfg.power.cpu_max << '|'
       << cfg.power.rate_max << '|' << cfg.power.battery_cap << '|' << cfg.beta << '|'
       << cfg.alpha << '|' << cfg.gamma << '|' << cfg.eta << '|' << cfg.partition.dims
       << '|' << cfg.partition.levels << '|' << cfg.horizon << '|'
       << static_cast<int>(cfg.run_options.init) << '|'
       << static_cast<int>(cfg.run_options.vq_scope) << '|'
       << cfg.run_options.literal_mode;
    const std::string s = os.str();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct CellResult {
    std::vector<SummaryRow> rows;
    std::vector<std::pair<std::string, RunRecord>> records;  // file name, record
    bool solver_converged = true;
};

CellResult run_cell(const ExperimentConfig& cfg, const std::string& param, double value,
                    std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    CellResult out;

    EnvParams env = cfg.env;
    env.seed = seed;
    const auto trace = build_trace(env, cfg.horizon);
    const auto windows = window_assignment(trace, cfg.partition);
    const std::uint64_t phash = params_hash(cfg);
    const std::string tag =
        (param.empty() ? "" : "_" + param + "=" + format_value(value)) + "_seed" +
        std::to_string(seed);

    // The pattern benchmark doubles as the regret reference for every policy.
    const auto t0 = clock::now();
    const OfflineSolution pattern_sol = solve_offline_pattern(
        trace, cfg.power, windows, cfg.partition.window_count(), cfg.solver);
    const double pattern_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    const auto bench_obj = slot_objectives(trace, pattern_sol.decisions, cfg.power);
    if (!pattern_sol.converged) out.solver_converged = false;

    for (const std::string& policy : cfg.policies) {
        const auto start = clock::now();
        RunRecord rec;
        if (policy == "oco") {
            RunOptions opts = cfg.run_options;
            if (opts.init == InitRule::Nominal)
                opts.nominal = nominal_duty_plan(cfg.env, cfg.power);
            rec = run_pattern_aware(trace, cfg.power, oco_params_for(cfg), cfg.partition,
                                    opts);
        } else if (policy == "greedy") {
            rec = greedy_schedule(trace, cfg.power);
        } else if (policy == "pattern_opt") {
            rec = simulate_decisions(trace, pattern_sol.decisions, cfg.power, windows,
                                     "pattern_opt");
        } else if (policy == "dynamic_opt") {
            const OfflineSolution dyn = solve_offline_dynamic(trace, cfg.power, cfg.solver);
            if (!dyn.converged) out.solver_converged = false;
            rec = simulate_decisions(trace, dyn.decisions, cfg.power, windows, "dynamic_opt");
        } else {
            throw std::invalid_argument("run_experiment: unknown policy '" + policy + "'");
        }
        double wall_ms =
            std::chrono::duration<double, std::milli>(clock::now() - start).count();
        if (policy == "pattern_opt") wall_ms += pattern_ms;
        rec.seed = seed;
        rec.params_hash = phash;

        const RegretSeries series = regret(rec, bench_obj);
        const DodStats dod = dod_stats(rec);
        SummaryRow row;
        row.param = param.empty() ? "-" : param;
        row.value = value;
        row.seed = seed;
        row.policy = policy;
        row.total_dod = dod.total;
        row.terminal_regret = series.regret.back();
        row.viol_g1 = series.violation_g1.back();
        row.viol_g2 = series.violation_g2.back();
        row.wall_ms = wall_ms;
        out.rows.push_back(row);
        out.records.emplace_back("run_" + policy + tag + ".csv", std::move(rec));
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
    {
        const ValidationResult v = validate_config(cfg);
        if (!v.ok()) {
            std::string msg = "run_experiment: invalid config:";
            for (const auto& e : v.errors) msg += "\n  " + e;
            throw std::invalid_argument(msg);
        }
    }
    fs::create_directories(cfg.output_dir);

    struct Cell {
        ExperimentConfig cfg;
        double value;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    const bool sweeping = !cfg.sweep.param.empty();
    const std::vector<double> values = sweeping ? cfg.sweep.values : std::vector<double>{0.0};
    for (double v : values) {
        ExperimentConfig c = cfg;
        if (sweeping) apply_sweep_value(c, cfg.sweep.param, v);
        for (std::uint64_t s : cfg.seeds) cells.push_back({c, v, s});
    }

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = std::max(1, jobs > 0 ? jobs : (hw > 0 ? hw : 4));

    std::vector<CellResult> results(cells.size());
    std::vector<std::string> errors;
    {
        std::vector<std::future<void>> futs;
        std::atomic<size_t> next{0};
        std::mutex err_mu;
        const auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                try {
                    results[i] = run_cell(cells[i].cfg, sweeping ? cfg.sweep.param : "",
                                          cells[i].value, cells[i].seed);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    errors.emplace_back(e.what());
                }
            }
        };
        futs.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            futs.push_back(std::async(std::launch::async, worker));
        for (auto& f : futs) f.get();
    }

    ExperimentResult res;
    auto cleanup = [&res] {
        for (const std::string& f : res.files) {
            std::error_code ec;
            fs::remove(f, ec);
        }
    };
    if (!errors.empty()) {
        cleanup();
        throw std::runtime_error("run_experiment: " + errors.front());
    }

    try {
        for (CellResult& cell : results) {
            if (!cell.solver_converged) res.solver_converged = false;
            for (auto& [name, rec] : cell.records) {
                const std::string path = (fs::path(cfg.output_dir) / name).string();
                write_csv(rec, path);
                res.files.push_back(path);
            }
            for (SummaryRow& row : cell.rows) res.summary.push_back(std::move(row));
        }

        const std::string summary_name =
            sweeping ? "sweep_" + cfg.sweep.param + ".csv" : "summary.csv";
        res.summary_path = (fs::path(cfg.output_dir) / summary_name).string();
        std::string body;
        const auto now =
            std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char ts[64];
        std::strftime(ts, sizeof ts, "%FT%TZ", std::gmtime(&now));
        body += std::string("# leosched summary generated=") + ts + "\n";
        body += "param,value,seed,policy,total_dod_j,terminal_regret_j,terminal_viol_g1,"
                "terminal_viol_g2,wall_ms\n";
        for (const SummaryRow& r : res.summary) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s,%.9g,%llu,%s,%.9g,%.9g,%.9g,%.9g,%.3f\n",
                          r.param.c_str(), r.value,
                          static_cast<unsigned long long>(r.seed), r.policy.c_str(),
                          r.total_dod, r.terminal_regret, r.viol_g1, r.viol_g2, r.wall_ms);
            body += buf;
        }
        std::ofstream out(res.summary_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("run_experiment: cannot write " + res.summary_path);
        out << body;
        res.files.push_back(res.summary_path);
    } catch (...) {
        cleanup();
        throw;
    }
    return res;
}

std::uint64_t csv_body_hash(const std::string& path, bool drop_last_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("csv_body_hash: cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    };
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '#') continue;
        if (drop_last_column) {
            const auto pos = line.find_last_of(',');
            if (pos != std::string::npos) line.erase(pos);
        }
        for (char c : line) mix(c);
        mix('\n');
    }
    return h;
}

}  // namespace leosched
