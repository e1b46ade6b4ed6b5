#include <gtest/gtest.h>

#include <random>

#include "../common/toy_dp.hpp"
#include "evac/controllers.hpp"
#include "evac/dp.hpp"
#include "evac/errors.hpp"
#include "fixtures.hpp"

using namespace evac;

TEST(StageCost, KnownValues) {
  StageCost c{1.0, 1.0, 23.0};
  EXPECT_DOUBLE_EQ(stage_cost(1700.0, 23.0, c, 1.0), 1700.0);
  EXPECT_DOUBLE_EQ(stage_cost(0.0, 25.0, c, 1.0), 4.0);
  c.comfort_weight = 100.0;
  EXPECT_DOUBLE_EQ(stage_cost(1700.0, 25.0, c, 1.0), 2100.0);
  EXPECT_THROW((StageCost{0.0, 0.0, 23.0}.validate()), ValidationError);
  EXPECT_THROW((StageCost{-1.0, 1.0, 23.0}.validate()), ValidationError);
}

TEST(Grid, UniformAxesAndNearest) {
  const Grid g = Grid::uniform(15.0, 45.0, 0.25, 0.0, 6800.0, 100.0);
  EXPECT_EQ(g.temp_axis.size(), 121u);
  EXPECT_EQ(g.q_axis.size(), 69u);
  EXPECT_DOUBLE_EQ(g.q_axis.back(), 6800.0);
  EXPECT_EQ(g.nearest_q(149.0), 1u);
  EXPECT_EQ(g.nearest_q(150.0), 1u);
  EXPECT_EQ(g.nearest_q(-5.0), 0u);
  EXPECT_EQ(g.nearest_q(9000.0), 68u);
  EXPECT_NO_THROW(g.validate(PlantLimits{}));
  const Grid wide = Grid::uniform(15.0, 45.0, 1.0, 0.0, 7000.0, 100.0);
  EXPECT_THROW(wide.validate(PlantLimits{}), ValidationError);
}

TEST(Solve, MatchesEnumerationOnToyInstances) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = test::random_toy(rng, 3, 3, 4);
    const auto views = inst.views();
    const CabinState x0{inst.grid.temp_axis[inst.t0], inst.grid.q_axis[inst.q0]};
    const DpSolution sol = solve(inst.grid, inst.limits, views, x0);
    const auto oracle = test::enumerate(inst);
    EXPECT_NEAR(sol.total_cost, oracle.cost, 1e-9 * oracle.cost);
    EXPECT_NEAR(sol.value_estimate, oracle.cost, 1e-9 * oracle.cost);
    EXPECT_EQ(sol.commands, oracle.commands);
  }
}

TEST(Solve, HorizonOnePicksSingleStageArgmin) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = test::random_toy(rng, 4, 2, 1);
    const auto views = inst.views();
    const CabinState x0{inst.grid.temp_axis[inst.t0], inst.grid.q_axis[inst.q0]};
    const DpSolution sol = solve(inst.grid, inst.limits, views, x0);
    const double c0 = inst.stages[0].cost_at(inst.t0, 0);
    const double c1 = inst.stages[0].cost_at(inst.t0, 1);
    EXPECT_DOUBLE_EQ(sol.total_cost, std::min(c0, c1));
    EXPECT_DOUBLE_EQ(sol.commands[0], c0 <= c1 ? 0.0 : 100.0);
  }
}

TEST(Solve, EnergyOnlyCostRunsAtMinimalCapacity) {
  const CabinPlant plant = test::simple_plant();
  const Grid grid = Grid::uniform(15.0, 45.0, 0.5, 0.0, 6800.0, 100.0);
  const StageCost cost{1.0, 0.0, 23.0};
  DisturbanceTrace d;
  for (int k = 0; k < 20; ++k) {
    d.samples.push_back({static_cast<double>(k), 33.0, 700.0, 8.0});
    d.speed_kmh.push_back(28.8);
  }
  const DpSolution sol = dp_benchmark(plant, d, cost, grid, {30.0, 1000.0});
  // Ramp down from the initial capacity as fast as the rate limit allows.
  for (std::size_t k = 0; k < sol.commands.size(); ++k) {
    EXPECT_DOUBLE_EQ(sol.commands[k], std::max(0.0, 500.0 - 500.0 * static_cast<double>(k)));
  }
}

TEST(Solve, NothingToCoolMeansAllOff) {
  // Ambient equal to the target, no sun, nobody aboard: zero load at target.
  auto v = test::simple_vehicle();
  v.cabin.passengers = 0;
  v.cabin.occupant_correction = 1.0;
  v.windows.clear();
  CabinPlant plant(v, test::flat_cop(), PlantLimits{});
  const Grid grid = Grid::uniform(15.0, 45.0, 0.25, 0.0, 6800.0, 100.0);
  DisturbanceTrace d;
  for (int k = 0; k < 10; ++k) {
    d.samples.push_back({static_cast<double>(k), 23.0, 0.0, 5.0});
    d.speed_kmh.push_back(18.0);
  }
  // The driver still adds 145 W; a weak comfort weight keeps the AC off.
  const DpSolution sol = dp_benchmark(plant, d, StageCost{1.0, 1e-3, 23.0}, grid, {23.0, 0.0});
  for (double q : sol.commands) EXPECT_DOUBLE_EQ(q, 0.0);
}

TEST(Solve, TerminalBandIsRespected) {
  const CabinPlant plant = test::simple_plant();
  const Grid grid = Grid::uniform(15.0, 45.0, 0.25, 0.0, 6800.0, 100.0);
  DisturbanceTrace d;
  for (int k = 0; k < 60; ++k) {
    d.samples.push_back({static_cast<double>(k), 35.0, 800.0, 10.0});
    d.speed_kmh.push_back(36.0);
  }
  SolveOptions opt;
  opt.terminal = TerminalBand{24.0, 26.0};
  const DpSolution sol = dp_benchmark(plant, d, StageCost{1.0, 0.0, 23.0}, grid, {30.0, 0.0}, opt);
  EXPECT_GE(sol.temps.back(), 24.0 - 0.3);
  EXPECT_LE(sol.temps.back(), 26.0 + 0.3);
  const DpSolution free = dp_benchmark(plant, d, StageCost{1.0, 0.0, 23.0}, grid, {30.0, 0.0});
  EXPECT_LE(free.total_cost, sol.total_cost);
}

TEST(Solve, InitialStateOutsideGridThrows) {
  std::mt19937_64 rng(3);
  const auto inst = test::random_toy(rng, 3, 3, 2);
  const auto views = inst.views();
  EXPECT_THROW(solve(inst.grid, inst.limits, views, {10.0, 0.0}), DomainError);
}

TEST(Solve, ThreadCountDoesNotChangeResult) {
  const CabinPlant plant = test::simple_plant();
  const Grid grid = Grid::uniform(15.0, 45.0, 0.25, 0.0, 6800.0, 100.0);
  DisturbanceTrace d;
  for (int k = 0; k < 30; ++k) {
    d.samples.push_back({static_cast<double>(k), 35.0, 800.0, 10.0});
    d.speed_kmh.push_back(36.0);
  }
  const StageCost cost{1.0, 300.0, 23.0};
  SolveOptions one;
  SolveOptions four;
  four.threads = 4;
  const auto a = dp_benchmark(plant, d, cost, grid, {35.0, 0.0}, one);
  const auto b = dp_benchmark(plant, d, cost, grid, {35.0, 0.0}, four);
  EXPECT_EQ(a.commands, b.commands);
  EXPECT_DOUBLE_EQ(a.total_cost, b.total_cost);
}
