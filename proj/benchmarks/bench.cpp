#include <benchmark/benchmark.h>

#include "leosched/baselines.hpp"
#include "leosched/harness.hpp"
#include "leosched/pattern.hpp"

using namespace leosched;

namespace {

std::vector<SlotContext> default_trace(std::int64_t horizon) {
    EnvParams env;
    return build_trace(env, horizon);
}

}  // namespace

static void BM_BuildTrace(benchmark::State& state) {
    EnvParams env;
    for (auto _ : state) {
        auto trace = build_trace(env, state.range(0));
        benchmark::DoNotOptimize(trace.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildTrace)->Arg(1440)->Arg(14400);

static void BM_OcoStep(benchmark::State& state) {
    const PowerParams pp;
    const OcoParams op = default_oco_params(14.0, 1440);
    SlotContext ctx;
    ctx.contact = true;
    ctx.snr = 17.0;
    ctx.frame_rate = 2.0;
    LearnerState st;
    st.x_prev = {1e9, 1e8};
    st.vq = {4e9, 2e9};
    st.g_prev = {1e8, -5e7};
    st.grad_prev = {1e-7, 1e-6};
    for (auto _ : state) {
        Decision d = oco_step(st, op, ctx, pp);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_OcoStep);

static void BM_PatternAwareRun(benchmark::State& state) {
    const auto trace = default_trace(state.range(0));
    const PowerParams pp;
    const OcoParams op = default_oco_params(14.0, state.range(0));
    for (auto _ : state) {
        RunRecord rec = run_pattern_aware(trace, pp, op, PatternPartition{});
        benchmark::DoNotOptimize(rec.rows.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PatternAwareRun)->Arg(1440);

static void BM_Greedy(benchmark::State& state) {
    const auto trace = default_trace(1440);
    const PowerParams pp;
    for (auto _ : state) {
        RunRecord rec = greedy_schedule(trace, pp);
        benchmark::DoNotOptimize(rec.rows.data());
    }
}
BENCHMARK(BM_Greedy);

static void BM_OfflineDynamic(benchmark::State& state) {
    const auto trace = default_trace(state.range(0));
    const PowerParams pp;
    SolverOptions opts;
    opts.max_iters = 500;
    opts.outer_rounds = 4;
    for (auto _ : state) {
        OfflineSolution sol = solve_offline_dynamic(trace, pp, opts);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(BM_OfflineDynamic)->Arg(288)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
