#include "leosched/environment.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace leosched {

namespace {

// 53-bit uniform in [0,1). std::uniform_real_distribution is implementation
// defined, which would break the bit-identical-trace contract.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("EnvParams." + field + ": " + why);
}

}  // namespace

void validate(const EnvParams& p) {
    if (p.orbit_period_slots < 1) fail("orbit_period_slots", "must be >= 1");
    if (!(p.light_fraction > 0.0) || p.light_fraction > 1.0)
        fail("light_fraction", "must be in (0, 1]");
    if (p.harvest_peak < 0.0) fail("harvest_peak", "must be >= 0");
    if (p.contact_windows_per_orbit < 0) fail("contact_windows_per_orbit", "must be >= 0");
    if (p.contact_window_len < 0) fail("contact_window_len", "must be >= 0");
    if (p.contact_window_len * p.contact_windows_per_orbit > p.orbit_period_slots)
        fail("contact_window_len", "contact windows do not fit in one orbit");
    if (!(p.slot_duration > 0.0)) fail("slot_duration", "must be > 0");
    if (!(p.bandwidth > 0.0)) fail("bandwidth", "must be > 0");
    if (!(p.snr_lo > 0.0)) fail("snr_lo", "must be > 0");
    if (p.snr_hi < p.snr_lo) fail("snr_hi", "must be >= snr_lo");
    if (p.frame_rate_lo < 0.0) fail("frame_rate_lo", "must be >= 0");
    if (p.frame_rate_hi < p.frame_rate_lo) fail("frame_rate_hi", "must be >= frame_rate_lo");
    if (!(p.frame_size_bits > 0.0)) fail("frame_size_bits", "must be > 0");
    if (p.base_load < 0.0) fail("base_load", "must be >= 0");
    contact_spans(p);  // placement consistency
}

int lit_slot_count(const EnvParams& p) {
    const int lit = static_cast<int>(std::lround(p.light_fraction * p.orbit_period_slots));
    return std::max(1, std::min(lit, p.orbit_period_slots));
}

double harvest_rate(std::int64_t t, const EnvParams& p) {
    const int lit = lit_slot_count(p);
    const auto phase = static_cast<double>((t - 1) % p.orbit_period_slots);
    if (phase >= lit) return 0.0;  // eclipse
    // Incidence angle: pi/2 at the arc edges, 0 at orbital noon.
    const double theta = (std::numbers::pi / 2.0) * std::abs(2.0 * phase / lit - 1.0);
    return p.harvest_peak * std::cos(theta);
}

std::vector<std::pair<int, int>> contact_spans(const EnvParams& p) {
    const int lit = lit_slot_count(p);
    const int ecl = p.orbit_period_slots - lit;
    const int len = p.contact_window_len;
    const int n_lit = (p.contact_windows_per_orbit + 1) / 2;
    const int n_ecl = p.contact_windows_per_orbit / 2;

    auto place = [len](int region_start, int region_len, int count,
                       std::vector<std::pair<int, int>>& out) {
        if (count == 0) return;
        if (len * count > region_len)
            throw std::invalid_argument(
                "EnvParams.contact_window_len: windows do not fit their orbit region");
        for (int j = 0; j < count; ++j) {
            const int center = region_len * (j + 1) / (count + 1);
            int start = std::clamp(center - len / 2, 0, region_len - len);
            out.emplace_back(region_start + start, len);
        }
        for (size_t i = out.size() - count; i + 1 < out.size(); ++i)
            if (out[i].first + len > out[i + 1].first)
                throw std::invalid_argument(
                    "EnvParams.contact_windows_per_orbit: windows overlap");
    };

    std::vector<std::pair<int, int>> spans;
    if (len > 0) {
        place(0, lit, n_lit, spans);
        place(lit, ecl, n_ecl, spans);
    }
    return spans;
}

std::vector<SlotContext> build_trace(const EnvParams& p, std::int64_t horizon) {
    validate(p);
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");

    std::vector<char> contact_phase(p.orbit_period_slots, 0);
    for (auto [start, len] : contact_spans(p))
        for (int i = 0; i < len; ++i) contact_phase[start + i] = 1;

    const int lit = lit_slot_count(p);
    std::mt19937_64 rng(p.seed);
    std::vector<SlotContext> trace(static_cast<size_t>(horizon));
    for (std::int64_t t = 1; t <= horizon; ++t) {
        SlotContext& c = trace[static_cast<size_t>(t - 1)];
        const int phase = static_cast<int>((t - 1) % p.orbit_period_slots);
        c.t = t;
        c.in_light = phase < lit;
        c.contact = contact_phase[phase] != 0;
        c.snr = uniform(rng, p.snr_lo, p.snr_hi);
        c.frame_rate = uniform(rng, p.frame_rate_lo, p.frame_rate_hi);
        c.harvest_energy = harvest_rate(t, p) * (p.slot_duration / 60.0);
        c.base_load = p.base_load;
    }
    return trace;
}

}  // namespace leosched
