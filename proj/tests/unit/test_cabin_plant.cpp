#include <gtest/gtest.h>

#include <cmath>

#include "evac/cabin_plant.hpp"
#include "evac/errors.hpp"
#include "evac/rk4.hpp"
#include "fixtures.hpp"

using namespace evac;

TEST(Rk4, ExactForLinearGrowthAndCloseForDecay) {
  EXPECT_DOUBLE_EQ(rk4_step([](double, double) { return 2.0; }, 0.0, 1.0, 0.5), 2.0);
  double y = 1.0;
  for (int k = 0; k < 10; ++k) y = rk4_step([](double, double v) { return -v; }, 0.1 * k, y, 0.1);
  EXPECT_NEAR(y, std::exp(-1.0), 1e-6);
}

namespace {
// Closed form of dT/dt = (a - b T - q) / C.
double exact(double t0, double a, double b, double q, double c, double t) {
  const double inf = (a - q) / b;
  return inf + (t0 - inf) * std::exp(-b * t / c);
}
}  // namespace

TEST(CabinPlant, EquilibriumHolds) {
  const CabinPlant plant = test::simple_plant();
  const EnvironmentSample env{0.0, 35.0, 800.0, 10.0};
  const LoadModel loads(plant.vehicle(), env);
  const double q = loads.total(23.0);
  ASSERT_GT(q, 0.0);
  EXPECT_NEAR(plant.integrate(loads, 23.0, q, 1.0), 23.0, 1e-6);
}

TEST(CabinPlant, MatchesClosedFormPerStep) {
  const CabinPlant plant = test::simple_plant();
  const EnvironmentSample env{0.0, 35.0, 800.0, 10.0};
  const LoadModel loads(plant.vehicle(), env);
  const double a = loads.total(0.0);
  const double b = loads.slope_w_k();
  for (double q : {0.0, 1500.0, 4000.0}) {
    for (double t0 : {18.0, 30.0, 45.0}) {
      EXPECT_NEAR(plant.integrate(loads, t0, q, 1.0), exact(t0, a, b, q, plant.heat_capacity(), 1.0),
                  1e-6);
    }
  }
}

TEST(CabinPlant, HeatsWithoutCooling) {
  const CabinPlant plant = test::simple_plant();
  const EnvironmentSample env{0.0, 35.0, 800.0, 10.0};
  const CabinState next = plant.transition({25.0, 0.0}, 0.0, env, 1.0);
  EXPECT_GT(next.temp_c, 25.0);
  EXPECT_DOUBLE_EQ(next.q_cool_w, 0.0);
}

TEST(CabinPlant, TransitionRejectsInfeasibleCommands) {
  const CabinPlant plant = test::simple_plant();
  const EnvironmentSample env{0.0, 35.0, 800.0, 10.0};
  EXPECT_THROW(plant.transition({25.0, 0.0}, 600.0, env, 1.0), DomainError);
  EXPECT_THROW(plant.transition({25.0, 6800.0}, 7000.0, env, 1.0), DomainError);
  EXPECT_NO_THROW(plant.transition({25.0, 0.0}, 500.0, env, 1.0));
  EXPECT_TRUE(plant.command_feasible(1000.0, 1500.0, 1.0));
  EXPECT_FALSE(plant.command_feasible(1000.0, 1501.0, 1.0));
}

TEST(CabinPlant, PowerUsesCop) {
  const CabinPlant plant = test::simple_plant();
  EXPECT_DOUBLE_EQ(plant.power(25.0, 35.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(plant.power(25.0, 35.0, 2500.0), 1000.0);
}
