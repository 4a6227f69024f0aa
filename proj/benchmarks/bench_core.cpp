#include <benchmark/benchmark.h>

#include "drainage/dynamics.hpp"
#include "drainage/joint.hpp"

namespace {

using namespace drainage;

void BM_UniformAt(benchmark::State& state) {
    Environment env(ModelParams{2, 0.5, 1, 64});
    std::int64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(env.uniform_at(LatticePoint{i, i + 1}));
        ++i;
    }
}
BENCHMARK(BM_UniformAt);

void BM_Successor(benchmark::State& state) {
    const double p = static_cast<double>(state.range(0)) / 100.0;
    Environment env(ModelParams{2, p, 7, 64});
    std::int64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(successor(env, LatticePoint{i % 1000, i / 1000}));
        ++i;
    }
}
BENCHMARK(BM_Successor)->Arg(25)->Arg(50)->Arg(75);

void BM_SuccessorD3(benchmark::State& state) {
    Environment env(ModelParams{3, 0.5, 7, 64});
    std::int64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(successor(env, LatticePoint{i % 100, i / 100, 0}));
        ++i;
    }
}
BENCHMARK(BM_SuccessorD3);

void BM_Trace(benchmark::State& state) {
    const std::int64_t horizon = state.range(0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        Environment env(ModelParams{2, 0.5, replicate_seed(11, seed++), 64});
        benchmark::DoNotOptimize(trace(env, LatticePoint{0, 0}, horizon));
    }
    state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_Trace)->Arg(1000)->Arg(10000);

void BM_PairRenewals(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) {
        ModelParams params{2, 0.5, replicate_seed(22, seed++), 64};
        Environment env(params);
        benchmark::DoNotOptimize(
            run_regenerations(env, {LatticePoint{4, 0}, LatticePoint{0, 0}}, 64));
    }
}
BENCHMARK(BM_PairRenewals);

void BM_PairCoalescence(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) {
        ModelParams params{2, 0.5, replicate_seed(33, seed++), 64};
        benchmark::DoNotOptimize(pair_coalescence(params, 4, 100000));
    }
}
BENCHMARK(BM_PairCoalescence);

}  // namespace

BENCHMARK_MAIN();
