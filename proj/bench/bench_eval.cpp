// Microbenchmarks pitting the parallel scoring kernels against their serial
// reference implementations. The serial variants exist to pin down the
// parallel results in tests, so the interesting numbers here are the
// speedup ratios at realistic problem sizes.

#include <benchmark/benchmark.h>

#include <vector>

#include "aqpe/baseline.hpp"
#include "aqpe/policy_eval.hpp"
#include "aqpe/rng.hpp"

namespace {

using namespace aqpe;

std::vector<double> ladder_policy(std::size_t n) {
    std::vector<double> policy(n);
    for (std::size_t i = 0; i < n; ++i)
        policy[i] = canonical_phase(0.3 + 0.17 * static_cast<double>(i));
    return policy;
}

EvalConfig bench_eval_config(std::size_t n) {
    EvalConfig cfg = make_eval_config(n);
    cfg.k_instances = 2000;
    cfg.m_repeats = 5;
    return cfg;
}

void bm_evaluate_policy(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> policy = ladder_policy(n);
    const EvalConfig cfg = bench_eval_config(n);
    RngStream stream = RngStream::from_seed(17);
    for (auto _ : state) {
        EvalResult r = evaluate_policy(policy, cfg, stream);
        benchmark::DoNotOptimize(r.holevo);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cfg.k_instances * cfg.m_repeats * n));
}

void bm_evaluate_policy_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> policy = ladder_policy(n);
    const EvalConfig cfg = bench_eval_config(n);
    RngStream stream = RngStream::from_seed(17);
    for (auto _ : state) {
        EvalResult r = evaluate_policy_serial(policy, cfg, stream);
        benchmark::DoNotOptimize(r.holevo);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cfg.k_instances * cfg.m_repeats * n));
}

void bm_baseline_variance(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    BaselineConfig cfg = make_baseline_config(n);
    cfg.k_instances = 20000;
    RngStream stream = RngStream::from_seed(23);
    for (auto _ : state) {
        EvalResult r = baseline_variance(cfg, stream);
        benchmark::DoNotOptimize(r.holevo);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cfg.k_instances * n));
}

void bm_baseline_variance_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    BaselineConfig cfg = make_baseline_config(n);
    cfg.k_instances = 20000;
    RngStream stream = RngStream::from_seed(23);
    for (auto _ : state) {
        EvalResult r = baseline_variance_serial(cfg, stream);
        benchmark::DoNotOptimize(r.holevo);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cfg.k_instances * n));
}

} // namespace

BENCHMARK(bm_evaluate_policy)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_evaluate_policy_serial)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_baseline_variance)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_baseline_variance_serial)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
