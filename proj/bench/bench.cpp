#include <benchmark/benchmark.h>

#include "hwepi/analytics.hpp"
#include "hwepi/batch.hpp"
#include "hwepi/epidemic.hpp"
#include "hwepi/experiments.hpp"
#include "hwepi/population.hpp"

using namespace hwepi;

static void BM_GeneratePopulation(benchmark::State& state) {
    ModelParams p = default_outbreak_params();
    p.n = state.range(0);
    std::uint64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(generate_population(p, SeedSpec{1, k++}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratePopulation)->Arg(1000)->Arg(10000);

static void BM_SimulateFinal(benchmark::State& state) {
    ModelParams p = default_outbreak_params();
    p.n = state.range(0);
    const auto pop = generate_population(p, SeedSpec{1, 0});
    std::uint64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_final(pop, p, SeedSpec{2, k++}).final_size);
}
BENCHMARK(BM_SimulateFinal)->Arg(1000)->Arg(10000);

static void BM_Batch(benchmark::State& state) {
    ModelParams p = default_outbreak_params();
    p.n = 1000;
    BatchOptions b;
    b.sims = state.range(0);
    for (auto _ : state) {
        ++b.seed;
        benchmark::DoNotOptimize(run_batch(p, b));
    }
}
BENCHMARK(BM_Batch)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Census(benchmark::State& state) {
    ModelParams p = default_outbreak_params();
    p.n = 2000;
    const auto pop = generate_population(p, SeedSpec{1, 0});
    for (auto _ : state) benchmark::DoNotOptimize(clump_susset_census(pop, p, SeedSpec{3, 0}));
}
BENCHMARK(BM_Census)->Unit(benchmark::kMillisecond);

static void BM_ExactTables(benchmark::State& state) {
    ModelParams p = default_sweep_params();
    p.d = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_tables(p, TableKind::susset, true, 0, 1));
}
BENCHMARK(BM_ExactTables)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloTables(benchmark::State& state) {
    ModelParams p = default_sweep_params();
    p.d = 2;
    p.infectious_period = InfectiousPeriod::exponential();
    for (auto _ : state) benchmark::DoNotOptimize(build_tables(p, TableKind::susset, false, state.range(0), 1));
}
BENCHMARK(BM_MonteCarloTables)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_FinalSize(benchmark::State& state) {
    const ModelParams p = default_outbreak_params();
    const auto m = CoarseModel::from(build_tables(p, TableKind::susset, true, 0, 1).pmf, p.theta);
    for (auto _ : state) benchmark::DoNotOptimize(solve_final_size_z(m, p.rates.beta_g).z);
}
BENCHMARK(BM_FinalSize);

static void BM_RouteB(benchmark::State& state) {
    const ModelParams p = default_outbreak_params();
    const auto lib = FineLibrary::build(p, 20000, SeedSpec{1, 0});
    for (auto _ : state) benchmark::DoNotOptimize(route_b(p, lib).xi);
}
BENCHMARK(BM_RouteB)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
