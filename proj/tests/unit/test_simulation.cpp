#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "evac/errors.hpp"
#include "evac/simulation.hpp"
#include "fixtures.hpp"

using namespace evac;

namespace {
class Fixed final : public Controller {
 public:
  explicit Fixed(double q) : q_(q) {}
  std::string_view name() const override { return "fixed"; }
  double command(const ControllerInput&) override { return q_; }

 private:
  double q_;
};

Mission constant_mission(std::size_t n, double t0, double q0 = 0.0) {
  std::vector<double> speed(n, 36.0), amb(n, 35.0), sol(n, 800.0);
  return make_mission("const", speed, amb, sol, t0, q0);
}

SimulationTrace synthetic(std::vector<double> temps, double energy) {
  SimulationTrace t;
  for (std::size_t k = 0; k < temps.size(); ++k) {
    TraceRow r;
    r.time_s = static_cast<double>(k);
    r.temp_c = temps[k];
    r.energy_j = energy * static_cast<double>(k + 1) / static_cast<double>(temps.size());
    t.rows.push_back(r);
  }
  return t;
}
}  // namespace

TEST(Run, ZeroLengthMission) {
  const CabinPlant plant = test::simple_plant();
  Fixed c(0.0);
  const auto trace = run(constant_mission(0, 30.0), c, plant);
  EXPECT_TRUE(trace.rows.empty());
  EXPECT_DOUBLE_EQ(trace.final_temp_c, 30.0);
}

TEST(Run, FollowsClosedFormUnderFixedCommand) {
  const CabinPlant plant = test::simple_plant();
  const Mission m = constant_mission(101, 40.0, 2000.0);
  Fixed c(2000.0);
  const auto trace = run(m, c, plant);
  const LoadModel loads(plant.vehicle(), m.disturbances->samples[0]);
  const double a = loads.total(0.0);
  const double b = loads.slope_w_k();
  const double inf = (a - 2000.0) / b;
  for (const TraceRow& r : trace.rows) {
    const double exact = inf + (40.0 - inf) * std::exp(-b * r.time_s / plant.heat_capacity());
    EXPECT_NEAR(r.temp_c, exact, 1e-4);
  }
}

TEST(Run, NoCoolingHeatsMonotonically) {
  const CabinPlant plant = test::simple_plant();
  Fixed c(0.0);
  const auto trace = run(constant_mission(50, 25.0), c, plant);
  for (std::size_t k = 1; k < trace.rows.size(); ++k) {
    EXPECT_GT(trace.rows[k].temp_c, trace.rows[k - 1].temp_c);
  }
  EXPECT_DOUBLE_EQ(trace.rows.back().energy_j, 0.0);
}

TEST(Run, CommandsAreClampedToTheRateLimit) {
  const CabinPlant plant = test::simple_plant();
  Fixed c(6800.0);
  const auto trace = run(constant_mission(20, 40.0), c, plant);
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    EXPECT_DOUBLE_EQ(trace.rows[k].q_cool_w, std::min(6800.0, 500.0 * static_cast<double>(k + 1)));
  }
}

TEST(Run, EnergyIsPowerIntegratedAtStepStart) {
  const CabinPlant plant = test::simple_plant();
  Fixed c(1500.0);
  const auto trace = run(constant_mission(10, 30.0, 1500.0), c, plant);
  double e = 0.0;
  for (const TraceRow& r : trace.rows) {
    EXPECT_DOUBLE_EQ(r.power_w, plant.power(r.temp_c, r.ambient_c, r.q_cool_w));
    e += r.power_w;
    EXPECT_DOUBLE_EQ(r.energy_j, e);
  }
}

TEST(Run, NonFiniteCommandAborts) {
  const CabinPlant plant = test::simple_plant();
  Fixed c(std::nan(""));
  EXPECT_THROW(run(constant_mission(3, 30.0), c, plant), DomainError);
}

TEST(Mission, RejectsMisalignedTraces) {
  std::vector<double> speed(5, 0.0), amb(4, 30.0), sol(5, 0.0);
  EXPECT_THROW(make_mission("m", speed, amb, sol), ValidationError);
  std::vector<double> hot(5, 80.0);
  EXPECT_THROW(make_mission("m", speed, hot, sol), ValidationError);
}

TEST(Metrics, KnownValues) {
  const auto flat = metrics(synthetic({23.0, 23.0, 23.0}, 1.0));
  EXPECT_DOUBLE_EQ(flat.mean_temp_c, 23.0);
  EXPECT_DOUBLE_EQ(flat.temp_std_c, 0.0);
  const auto alt = metrics(synthetic({22.0, 24.0, 22.0, 24.0}, 1.0));
  EXPECT_DOUBLE_EQ(alt.mean_temp_c, 23.0);
  EXPECT_DOUBLE_EQ(alt.temp_std_c, 1.0);
  const auto base = synthetic({23.0}, 2.3698e6);
  const auto m = metrics(synthetic({23.0}, 2.0e6), &base);
  ASSERT_TRUE(m.saving.has_value());
  EXPECT_NEAR(*m.saving, 0.156, 5e-4);
  EXPECT_DOUBLE_EQ(m.total_energy_j, 2.0e6);
}

TEST(Metrics, SkipWindowAndEmptyTrace) {
  const auto t = synthetic({40.0, 30.0, 22.0, 24.0}, 1.0);
  const auto m = metrics(t, nullptr, MetricsOptions{2.0});
  EXPECT_DOUBLE_EQ(m.mean_temp_c, 23.0);
  EXPECT_THROW(metrics(SimulationTrace{}), ValidationError);
  EXPECT_THROW(metrics(t, nullptr, MetricsOptions{10.0}), ValidationError);
}

TEST(ScaleCycle, KnownValues) {
  const std::vector<double> v{0.0, 50.0, 40.0};
  EXPECT_EQ(scale_cycle(v, 1.0), v);
  EXPECT_NEAR(scale_cycle(v, 0.68)[1], 34.0, 1e-12);
  EXPECT_NEAR(scale_cycle(v, 1.45)[2], 58.0, 1e-12);
  EXPECT_THROW(scale_cycle(v, 0.0), DomainError);
}

TEST(TraceCsv, HeaderAndRows) {
  const CabinPlant plant = test::simple_plant();
  Fixed c(0.0);
  const auto trace = run(constant_mission(3, 30.0), c, plant);
  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("time_s,speed_kmh,ambient_c,solar_wm2,cabin_c,q_cool_w", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}
