#include <benchmark/benchmark.h>

#include <memory>

#include "evac/config.hpp"
#include "evac/controllers.hpp"
#include "evac/synthetic_cycles.hpp"

using namespace evac;

namespace {

std::shared_ptr<DisturbanceTrace> urban_trace(std::size_t n) {
  const AppConfig cfg = default_config();
  auto speeds = urban_reference_cycle();
  speeds.resize(n);
  auto d = std::make_shared<DisturbanceTrace>();
  for (std::size_t k = 0; k < n; ++k) {
    d->samples.push_back({static_cast<double>(k), cfg.simulation.ambient_c, cfg.simulation.solar_wm2,
                          kmh_to_ms(speeds[k])});
    d->speed_kmh.push_back(speeds[k]);
  }
  return d;
}

void BM_LoadModel(benchmark::State& state) {
  const AppConfig cfg = default_config();
  const EnvironmentSample env{0.0, 35.0, 900.0, 11.0};
  double t = 20.0;
  for (auto _ : state) {
    const LoadModel m(cfg.vehicle, env);
    benchmark::DoNotOptimize(m.total(t));
    t = t > 40.0 ? 20.0 : t + 0.1;
  }
}
BENCHMARK(BM_LoadModel);

void BM_CopLookup(benchmark::State& state) {
  const AppConfig cfg = default_config();
  double t = 18.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cfg.cop_map(t, 37.5, 0.55));
    t = t > 44.0 ? 18.0 : t + 0.37;
  }
}
BENCHMARK(BM_CopLookup);

void BM_MarkovFit(benchmark::State& state) {
  const auto corpus = urban_corpus(static_cast<std::size_t>(state.range(0)), 1.0);
  const VelocityQuantizer q;
  for (auto _ : state) benchmark::DoNotOptimize(TransitionMatrix::fit(corpus, q));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1370);
}
BENCHMARK(BM_MarkovFit)->Arg(5)->Arg(20);

void BM_DpSolve(benchmark::State& state) {
  const AppConfig cfg = default_config();
  const CabinPlant plant = cfg.make_plant();
  const Grid grid = cfg.grid.build(cfg.plant);
  const auto d = urban_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dp_benchmark(plant, *d, cfg.cost, grid, {40.0, 0.0}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DpSolve)->Arg(5)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SmpcStep(benchmark::State& state) {
  const AppConfig cfg = default_config();
  const CabinPlant plant = cfg.make_plant();
  const Grid grid = cfg.grid.build(cfg.plant);
  const auto d = urban_trace(200);
  const auto matrix = TransitionMatrix::fit(urban_corpus(20, 1.0), cfg.quantizer);
  ControllerInput in{100, 100.0, 24.0, 2500.0, d->speed_kmh[100], d->samples[100]};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        smpc_step(in, plant, matrix, cfg.cost, grid, cfg.smpc.controller.horizon, *d));
  }
}
BENCHMARK(BM_SmpcStep)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
