#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "leosched/environment.hpp"

using namespace leosched;

namespace {

EnvParams tiny_orbit() {
    // Orbit of 4 slots, half lit: the lit arc has length 2, so slot offset 1
    // is exactly orbital noon (incidence angle 0).
    EnvParams p;
    p.orbit_period_slots = 4;
    p.light_fraction = 0.5;
    p.contact_windows_per_orbit = 2;
    p.contact_window_len = 1;
    return p;
}

}  // namespace

TEST_CASE("harvest rate endpoints") {
    const EnvParams p = tiny_orbit();
    CHECK(harvest_rate(2, p) == doctest::Approx(30.0).epsilon(1e-12));  // noon
    CHECK(harvest_rate(1, p) == doctest::Approx(0.0).epsilon(1e-9));    // sunrise, pi/2
    CHECK(harvest_rate(3, p) == 0.0);                                   // eclipse
    CHECK(harvest_rate(4, p) == 0.0);
    // Deterministic and periodic.
    CHECK(harvest_rate(2, p) == harvest_rate(6, p));
}

TEST_CASE("trace is reproducible bit for bit") {
    const EnvParams p;  // defaults
    const auto a = build_trace(p, 300);
    const auto b = build_trace(p, 300);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].snr == b[i].snr);
        CHECK(a[i].frame_rate == b[i].frame_rate);
        CHECK(a[i].harvest_energy == b[i].harvest_energy);
        CHECK(a[i].in_light == b[i].in_light);
        CHECK(a[i].contact == b[i].contact);
    }
    // Longer traces extend shorter ones (same seed family).
    const auto c = build_trace(p, 600);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].snr == c[i].snr);
}

TEST_CASE("default orbit splits 96 slots into 63 lit + 33 eclipse") {
    const EnvParams p;
    CHECK(lit_slot_count(p) == 63);
    const auto trace = build_trace(p, 96);
    int lit = 0;
    for (const auto& c : trace) lit += c.in_light ? 1 : 0;
    CHECK(lit == 63);
}

TEST_CASE("contact windows: one span in light, one in eclipse, nothing else") {
    const EnvParams p;
    const auto spans = contact_spans(p);
    REQUIRE(spans.size() == 2);
    const int lit = lit_slot_count(p);
    CHECK(spans[0].first + spans[0].second <= lit);        // inside the lit arc
    CHECK(spans[1].first >= lit);                          // inside eclipse
    CHECK(spans[1].first + spans[1].second <= p.orbit_period_slots);

    const auto trace = build_trace(p, 96);
    int contact_slots = 0;
    for (const auto& c : trace) contact_slots += c.contact ? 1 : 0;
    CHECK(contact_slots == 2 * p.contact_window_len);
    for (const auto& c : trace) {
        const int phase = static_cast<int>((c.t - 1) % p.orbit_period_slots);
        const bool inside =
            (phase >= spans[0].first && phase < spans[0].first + spans[0].second) ||
            (phase >= spans[1].first && phase < spans[1].first + spans[1].second);
        CHECK(c.contact == inside);
    }
}

TEST_CASE("trace periodicity and range invariants") {
    const EnvParams p;
    const auto trace = build_trace(p, 1440);
    for (size_t i = 0; i + p.orbit_period_slots < trace.size(); ++i) {
        CHECK(trace[i].in_light == trace[i + p.orbit_period_slots].in_light);
        CHECK(trace[i].contact == trace[i + p.orbit_period_slots].contact);
    }
    for (const auto& c : trace) {
        CHECK(c.snr >= p.snr_lo);
        CHECK(c.snr <= p.snr_hi);
        CHECK(c.frame_rate >= p.frame_rate_lo);
        CHECK(c.frame_rate <= p.frame_rate_hi);
        CHECK(c.harvest_energy >= 0.0);
        if (!c.in_light) CHECK(c.harvest_energy == 0.0);
    }
}

TEST_CASE("harvest per orbit is capped by peak * lit slots") {
    const EnvParams p;
    const auto trace = build_trace(p, 96);
    double total = 0.0;
    for (const auto& c : trace) total += c.harvest_energy;
    CHECK(total <= p.harvest_peak * lit_slot_count(p) * (p.slot_duration / 60.0) + 1e-9);
    CHECK(total > 0.0);
}

TEST_CASE("invalid parameters are rejected by name") {
    EnvParams p;
    CHECK_THROWS_AS(build_trace(p, 0), std::invalid_argument);

    p = EnvParams{};
    p.light_fraction = 0.0;
    CHECK_THROWS_WITH_AS(build_trace(p, 10),
                         doctest::Contains("light_fraction"), std::invalid_argument);

    p = EnvParams{};
    p.light_fraction = 1.2;
    CHECK_THROWS_AS(build_trace(p, 10), std::invalid_argument);

    p = EnvParams{};
    p.contact_window_len = 50;  // 2 windows of 50 in a 96-slot orbit
    CHECK_THROWS_AS(build_trace(p, 10), std::invalid_argument);

    p = EnvParams{};
    p.snr_lo = 0.0;
    CHECK_THROWS_WITH_AS(build_trace(p, 10), doctest::Contains("snr_lo"),
                         std::invalid_argument);

    p = EnvParams{};
    p.frame_rate_lo = -1.0;
    CHECK_THROWS_AS(build_trace(p, 10), std::invalid_argument);
}

TEST_CASE("different seeds give different draws") {
    EnvParams a, b;
    b.seed = 43;
    const auto ta = build_trace(a, 50);
    const auto tb = build_trace(b, 50);
    bool any_diff = false;
    for (size_t i = 0; i < ta.size(); ++i) any_diff |= ta[i].snr != tb[i].snr;
    CHECK(any_diff);
}
