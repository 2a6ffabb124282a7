#include <benchmark/benchmark.h>

#include "preempt/cara.hpp"
#include "preempt/equilibrium.hpp"
#include "preempt/sim.hpp"

namespace {

using namespace preempt;

const ModelParams kParams{0.01, 0.2, 0.04, 0.3, 0.03, 10.0, 1.0, 0.35};
const RegulatorLaw kLaw{0.0, 0.5, 0.2, 0.3};

void BM_GameConstruction(benchmark::State& state) {
    const Model model(kParams);
    for (auto _ : state) benchmark::DoNotOptimize(Game(model, kLaw).thresholds());
}
BENCHMARK(BM_GameConstruction);

void BM_StrategyAt(benchmark::State& state) {
    const Game game(Model(kParams), kLaw);
    double y = 0.0;
    for (auto _ : state) {
        y = y < 2.0 ? y + 0.001 : 0.0;
        benchmark::DoNotOptimize(game.strategy_at(y));
    }
}
BENCHMARK(BM_StrategyAt);

void BM_ThresholdsGamma(benchmark::State& state) {
    const Game game(Model(kParams), kLaw);
    const RiskAversion gamma(static_cast<double>(state.range(0)) / 10.0);
    for (auto _ : state) benchmark::DoNotOptimize(thresholds_gamma(game, gamma));
}
BENCHMARK(BM_ThresholdsGamma)->Arg(1)->Arg(10)->Arg(100);

void BM_BestResponseGrid(benchmark::State& state) {
    const Game game(Model(kParams), kLaw);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(best_response_grid(game, 0.45, n));
}
BENCHMARK(BM_BestResponseGrid)->Arg(51)->Arg(201);

void BM_SimulateGame(benchmark::State& state) {
    const Game game(Model(kParams), kLaw);
    const auto rules = equilibrium_rules(game);
    SimConfig config;
    config.n_paths = static_cast<std::uint64_t>(state.range(0));
    config.horizon = 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_game(game.model(), kLaw, 0.45, rules, config));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateGame)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
