#include "gumdp/baselines.hpp"
#include "gumdp/environments.hpp"
#include "gumdp/estimation.hpp"
#include "gumdp/mcts.hpp"
#include "gumdp/occupancy_mdp.hpp"

#include <benchmark/benchmark.h>

using namespace gumdp;

static void BM_MctsSearch(benchmark::State& state) {
    auto g = build_illustrative(IllustrativeTask::Entropy);
    PlannerConfig cfg;
    cfg.iterations = static_cast<std::size_t>(state.range(0));
    const auto x = initial_state(g, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcts_search(g, 100, x, cfg).action);
        ++cfg.seed;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MctsSearch)->Arg(100)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_MctsSearchLake(benchmark::State& state) {
    auto g = build_lake(8, 1.0 / 3.0, 0.99);
    PlannerConfig cfg;
    cfg.iterations = 1000;
    const auto x = initial_state(g, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcts_search(g, 200, x, cfg).action);
        ++cfg.seed;
    }
}
BENCHMARK(BM_MctsSearchLake)->Unit(benchmark::kMillisecond);

static void BM_ExactRootValue(benchmark::State& state) {
    auto g = build_random(3, 3, 2, ObjectiveKind::Entropy, 0.9);
    const auto horizon = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(exact_root_value(g, horizon));
}
BENCHMARK(BM_ExactRootValue)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

static void BM_ExactSingleTrialValue(benchmark::State& state) {
    auto g = build_alternation_gumdp(0.9, 0.5);
    StationaryPolicyHandle pol(alternation_stationary_policy(0.5));
    for (auto _ : state) benchmark::DoNotOptimize(exact_single_trial_value(g, pol, 30));
}
BENCHMARK(BM_ExactSingleTrialValue)->Unit(benchmark::kMillisecond);

static void BM_FrankWolfe(benchmark::State& state) {
    auto g = build_lake(8);
    for (auto _ : state) benchmark::DoNotOptimize(frank_wolfe_infinite_trials(g, 100).trace.back());
}
BENCHMARK(BM_FrankWolfe)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
