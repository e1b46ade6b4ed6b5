#pragma once

// Control strategies behind one interface: the rule-based bang-bang law,
// the full-information DP benchmark, and receding-horizon stochastic MPC
// driven by a speed forecaster.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evac/cabin_plant.hpp"
#include "evac/dp.hpp"
#include "evac/velocity_markov.hpp"

namespace evac {

struct ControllerInput {
  std::size_t step = 0;
  double time_s = 0.0;
  double temp_c = 0.0;
  double q_prev_w = 0.0;
  double speed_kmh = 0.0;
  EnvironmentSample env;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string_view name() const = 0;
  // Requested cooling capacity; the simulator applies clamp_command.
  virtual double command(const ControllerInput& in) = 0;
};

struct BangBangConfig {
  double t_high_c = 26.0;
  double t_low_c = 20.0;
  double k_rule_w = 1000.0;
  double b_rule_w = 2000.0;
  // Latch full capacity after crossing t_high until t_low is reached.
  bool hysteresis = false;

  void validate() const;
};

// The literal three-branch law. Pure function of the cabin temperature.
double bang_bang_step(double temp_c, const BangBangConfig& cfg, const PlantLimits& limits);

class BangBangController final : public Controller {
 public:
  BangBangController(BangBangConfig cfg, PlantLimits limits);
  std::string_view name() const override { return "bangbang"; }
  double command(const ControllerInput& in) override;

 private:
  BangBangConfig cfg_;
  PlantLimits limits_;
  bool latched_ = false;
};

// Replays a precomputed command sequence (open-loop DP benchmark).
class ScheduleController final : public Controller {
 public:
  ScheduleController(std::string name, std::vector<double> commands);
  std::string_view name() const override { return name_; }
  double command(const ControllerInput& in) override;

 private:
  std::string name_;
  std::vector<double> commands_;
};

// Per-step disturbances over a whole mission.
struct DisturbanceTrace {
  std::vector<EnvironmentSample> samples;
  std::vector<double> speed_kmh;
};

// Solves one DP over the whole mission with full disturbance knowledge and
// returns the open-loop optimum.
DpSolution dp_benchmark(const CabinPlant& plant, const DisturbanceTrace& mission,
                        const StageCost& cost, const Grid& grid, const CabinState& x0,
                        const SolveOptions& options = {});

class SpeedForecaster {
 public:
  virtual ~SpeedForecaster() = default;
  // Speeds for steps step+1 .. step+horizon.
  virtual std::vector<double> forecast(std::size_t step, double current_kmh,
                                       std::size_t horizon) = 0;
  virtual std::size_t fallback_events() const { return 0; }
};

class MarkovForecaster final : public SpeedForecaster {
 public:
  MarkovForecaster(std::shared_ptr<const TransitionMatrix> matrix,
                   PredictionMode mode = PredictionMode::argmax, std::uint64_t seed = 0);
  std::vector<double> forecast(std::size_t step, double current_kmh, std::size_t horizon) override;
  std::size_t fallback_events() const override { return fallbacks_; }

 private:
  std::shared_ptr<const TransitionMatrix> matrix_;
  PredictionMode mode_;
  std::uint64_t seed_;
  std::size_t fallbacks_ = 0;
};

// Perfect foresight: returns the recorded future speeds (the last sample is
// held past the end of the trace).
class OracleForecaster final : public SpeedForecaster {
 public:
  explicit OracleForecaster(std::vector<double> speeds_kmh);
  std::vector<double> forecast(std::size_t step, double current_kmh, std::size_t horizon) override;

 private:
  std::vector<double> speeds_;
};

struct SmpcConfig {
  std::size_t horizon = 5;
  // Never plan past the end of the mission.
  bool shrink_at_end = true;
};

// Builds the horizon disturbances for step k: the current speed for the first
// stage and forecast speeds for the rest; ambient and solar are read ahead
// from the mission's environment trace.
std::vector<EnvironmentSample> assemble_horizon(const DisturbanceTrace& mission, std::size_t step,
                                                double current_kmh,
                                                std::span<const double> forecast_kmh,
                                                std::size_t horizon);

class SmpcController final : public Controller {
 public:
  SmpcController(const CabinPlant& plant, StageCost cost, Grid grid, SmpcConfig config,
                 std::shared_ptr<const DisturbanceTrace> mission,
                 std::unique_ptr<SpeedForecaster> forecaster);

  std::string_view name() const override { return "smpc"; }
  double command(const ControllerInput& in) override;

  std::size_t fallback_events() const { return forecaster_->fallback_events(); }

 private:
  const CabinPlant* plant_;
  StageCost cost_;
  Grid grid_;
  SmpcConfig config_;
  std::shared_ptr<const DisturbanceTrace> mission_;
  std::unique_ptr<SpeedForecaster> forecaster_;
};

// One receding-horizon decision: predict, assemble, solve, return the first
// command.
double smpc_step(const ControllerInput& in, const CabinPlant& plant,
                 const TransitionMatrix& predictor, const StageCost& cost, const Grid& grid,
                 std::size_t horizon, const DisturbanceTrace& mission);

}  // namespace evac
