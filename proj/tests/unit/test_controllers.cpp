#include <gtest/gtest.h>

#include <memory>

#include "evac/config.hpp"
#include "evac/controllers.hpp"
#include "evac/errors.hpp"
#include "evac/simulation.hpp"
#include "fixtures.hpp"

using namespace evac;

TEST(BangBang, KnownValues) {
  const BangBangConfig cfg;
  const PlantLimits l;
  EXPECT_DOUBLE_EQ(bang_bang_step(27.0, cfg, l), 6800.0);
  EXPECT_DOUBLE_EQ(bang_bang_step(19.0, cfg, l), 0.0);
  EXPECT_DOUBLE_EQ(bang_bang_step(23.0, cfg, l), 2500.0);
  EXPECT_DOUBLE_EQ(bang_bang_step(26.0, cfg, l), 6800.0);
  EXPECT_DOUBLE_EQ(bang_bang_step(20.0, cfg, l), 0.0);
  EXPECT_THROW((BangBangConfig{20.0, 26.0}.validate()), ValidationError);
}

TEST(BangBang, HysteresisLatchesFullCapacity) {
  BangBangConfig cfg;
  cfg.hysteresis = true;
  BangBangController c(cfg, PlantLimits{});
  ControllerInput in;
  in.temp_c = 23.0;
  EXPECT_DOUBLE_EQ(c.command(in), 2500.0);
  in.temp_c = 26.5;
  EXPECT_DOUBLE_EQ(c.command(in), 6800.0);
  in.temp_c = 23.0;
  EXPECT_DOUBLE_EQ(c.command(in), 6800.0);
  in.temp_c = 20.0;
  EXPECT_DOUBLE_EQ(c.command(in), 0.0);
  in.temp_c = 23.0;
  EXPECT_DOUBLE_EQ(c.command(in), 2500.0);

  BangBangController literal(BangBangConfig{}, PlantLimits{});
  in.temp_c = 26.5;
  literal.command(in);
  in.temp_c = 23.0;
  EXPECT_DOUBLE_EQ(literal.command(in), 2500.0);
}

TEST(Schedule, ReplaysAndRejectsOverrun) {
  ScheduleController s("dp", {100.0, 200.0});
  ControllerInput in;
  EXPECT_DOUBLE_EQ(s.command(in), 100.0);
  in.step = 1;
  EXPECT_DOUBLE_EQ(s.command(in), 200.0);
  in.step = 2;
  EXPECT_THROW(s.command(in), DomainError);
}

TEST(Oracle, ReturnsFutureSpeedsAndHoldsTheLast) {
  OracleForecaster f({0.0, 10.0, 20.0, 30.0});
  EXPECT_EQ(f.forecast(0, 0.0, 2), (std::vector<double>{10.0, 20.0}));
  EXPECT_EQ(f.forecast(2, 20.0, 3), (std::vector<double>{30.0, 30.0, 30.0}));
}

TEST(AssembleHorizon, CurrentSpeedThenForecast) {
  DisturbanceTrace d;
  for (int k = 0; k < 4; ++k) {
    d.samples.push_back({static_cast<double>(k), 30.0 + k, 100.0 * k, 0.0});
    d.speed_kmh.push_back(0.0);
  }
  const std::vector<double> fc{36.0, 72.0};
  const auto env = assemble_horizon(d, 2, 18.0, fc, 3);
  ASSERT_EQ(env.size(), 3u);
  EXPECT_DOUBLE_EQ(env[0].air_speed_ms, 5.0);
  EXPECT_DOUBLE_EQ(env[1].air_speed_ms, 10.0);
  EXPECT_DOUBLE_EQ(env[2].air_speed_ms, 20.0);
  EXPECT_DOUBLE_EQ(env[0].ambient_c, 32.0);
  EXPECT_DOUBLE_EQ(env[1].ambient_c, 33.0);
  EXPECT_DOUBLE_EQ(env[2].ambient_c, 33.0);  // held past the end
}

namespace {
std::shared_ptr<DisturbanceTrace> constant_trace(std::size_t n, double speed, double amb, double sol) {
  auto d = std::make_shared<DisturbanceTrace>();
  for (std::size_t k = 0; k < n; ++k) {
    d->samples.push_back({static_cast<double>(k), amb, sol, kmh_to_ms(speed)});
    d->speed_kmh.push_back(speed);
  }
  return d;
}
}  // namespace

TEST(Smpc, HorizonOneIsMyopicArgmin) {
  const CabinPlant plant = test::simple_plant();
  const Grid grid = Grid::uniform(15.0, 45.0, 0.25, 0.0, 6800.0, 100.0);
  const StageCost cost{1.0, 300.0, 23.0};
  const auto d = constant_trace(10, 40.0, 35.0, 800.0);
  ControllerInput in{0, 0.0, 30.0, 1000.0, 40.0, d->samples[0]};
  std::vector<std::uint64_t> counts(60 * 60, 0);
  counts[20 * 60 + 20] = 1;
  const auto m = TransitionMatrix::from_counts(VelocityQuantizer{}, counts);
  const double q = smpc_step(in, plant, m, cost, grid, 1, *d);
  // Myopic stage: the temperature term is fixed at the start of the step, so
  // the cheapest feasible command is the lowest one.
  const CabinStage stage(plant, d->samples[0], cost, 1.0);
  double best = 1e300;
  double best_q = -1.0;
  for (double c : grid.q_axis) {
    if (std::abs(c - 1000.0) > 500.0 + 1e-9) continue;
    const double v = stage.cost(30.0, c);
    if (v < best) {
      best = v;
      best_q = c;
    }
  }
  EXPECT_DOUBLE_EQ(q, best_q);
}

TEST(Smpc, HoldsEquilibriumNearTheLoad) {
  const AppConfig cfg = default_config();
  const CabinPlant plant = cfg.make_plant();
  const Grid grid = cfg.grid.build(cfg.plant);
  const auto d = constant_trace(30, 40.0, 30.0, 600.0);
  const LoadModel loads(plant.vehicle(), d->samples[0]);
  const double load = loads.total(cfg.cost.target_c);
  auto matrix = std::make_shared<TransitionMatrix>([] {
    std::vector<std::uint64_t> counts(60 * 60, 0);
    for (std::size_t i = 0; i < 60; ++i) counts[i * 60 + i] = 1;
    return TransitionMatrix::from_counts(VelocityQuantizer{}, counts);
  }());
  SmpcController c(plant, cfg.cost, grid, SmpcConfig{}, d, std::make_unique<MarkovForecaster>(matrix));
  const Mission mission{"eq", d, cfg.cost.target_c, grid.q_axis[grid.nearest_q(load)], 1.0};
  const SimulationTrace trace = run(mission, c, plant);
  // The last steps plan over a shrinking horizon and may let the cabin drift.
  const std::size_t steady = trace.rows.size() - cfg.smpc.controller.horizon;
  for (std::size_t k = 0; k < steady; ++k) {
    EXPECT_LE(std::abs(trace.rows[k].q_cool_w - load), 100.0 + 1e-9) << "step " << k;
  }
}

TEST(Smpc, ConstructorValidates) {
  const CabinPlant plant = test::simple_plant();
  const Grid grid = Grid::uniform(15.0, 45.0, 0.25, 0.0, 6800.0, 100.0);
  const auto d = constant_trace(5, 40.0, 35.0, 800.0);
  EXPECT_THROW(SmpcController(plant, StageCost{}, grid, SmpcConfig{0, true}, d,
                              std::make_unique<OracleForecaster>(d->speed_kmh)),
               ValidationError);
  EXPECT_THROW(SmpcController(plant, StageCost{}, grid, SmpcConfig{}, d, nullptr), ValidationError);
  EXPECT_THROW(MarkovForecaster(nullptr), ValidationError);
}

TEST(Smpc, FullHorizonOracleMatchesDp) {
  const CabinPlant plant = test::simple_plant();
  const Grid grid = Grid::uniform(15.0, 45.0, 0.25, 0.0, 6800.0, 100.0);
  const StageCost cost{1.0, 300.0, 23.0};
  const auto d = constant_trace(40, 40.0, 35.0, 800.0);
  const DpSolution dp = dp_benchmark(plant, *d, cost, grid, {30.0, 0.0});
  SmpcController c(plant, cost, grid, SmpcConfig{40, true}, d,
                   std::make_unique<OracleForecaster>(d->speed_kmh));
  const SimulationTrace trace = run(Mission{"m", d, 30.0, 0.0, 1.0}, c, plant);
  EXPECT_NEAR(trace_cost(trace, cost), dp.total_cost, 0.01 * dp.total_cost);
}
