#include "evac/controllers.hpp"

#include <algorithm>

#include "evac/errors.hpp"

namespace evac {

void BangBangConfig::validate() const {
  if (!(t_low_c < t_high_c)) throw ValidationError("bangbang: t_low must be below t_high");
}

double bang_bang_step(double temp_c, const BangBangConfig& cfg, const PlantLimits& limits) {
  if (temp_c >= cfg.t_high_c) return limits.q_cool_max_w;
  if (temp_c <= cfg.t_low_c) return limits.q_cool_min_w;
  return cfg.k_rule_w * (temp_c - cfg.t_low_c) / (cfg.t_high_c - cfg.t_low_c) + cfg.b_rule_w;
}

BangBangController::BangBangController(BangBangConfig cfg, PlantLimits limits)
    : cfg_(cfg), limits_(limits) {
  cfg_.validate();
}

double BangBangController::command(const ControllerInput& in) {
  if (cfg_.hysteresis) {
    if (in.temp_c >= cfg_.t_high_c) latched_ = true;
    if (in.temp_c <= cfg_.t_low_c) latched_ = false;
    if (latched_) return limits_.q_cool_max_w;
  }
  return bang_bang_step(in.temp_c, cfg_, limits_);
}

ScheduleController::ScheduleController(std::string name, std::vector<double> commands)
    : name_(std::move(name)), commands_(std::move(commands)) {}

double ScheduleController::command(const ControllerInput& in) {
  if (in.step >= commands_.size()) {
    throw DomainError("schedule controller: step beyond the precomputed schedule");
  }
  return commands_[in.step];
}

DpSolution dp_benchmark(const CabinPlant& plant, const DisturbanceTrace& mission,
                        const StageCost& cost, const Grid& grid, const CabinState& x0,
                        const SolveOptions& options) {
  std::vector<CabinStage> stages;
  stages.reserve(mission.samples.size());
  for (const EnvironmentSample& env : mission.samples) {
    stages.emplace_back(plant, env, cost, grid.dt_s);
  }
  std::vector<const DpStage*> views;
  views.reserve(stages.size());
  for (const CabinStage& s : stages) views.push_back(&s);
  return solve(grid, plant.limits(), views, x0, options);
}

MarkovForecaster::MarkovForecaster(std::shared_ptr<const TransitionMatrix> matrix,
                                   PredictionMode mode, std::uint64_t seed)
    : matrix_(std::move(matrix)), mode_(mode), seed_(seed) {
  if (!matrix_) throw ValidationError("markov forecaster: missing transition matrix");
}

std::vector<double> MarkovForecaster::forecast(std::size_t step, double current_kmh,
                                               std::size_t horizon) {
  // Sample mode draws a fresh stream per step, derived from the base seed.
  SpeedPrediction p = predict(*matrix_, current_kmh, horizon, mode_, seed_ + step);
  fallbacks_ += p.fallback_steps;
  return std::move(p.speeds_kmh);
}

OracleForecaster::OracleForecaster(std::vector<double> speeds_kmh) : speeds_(std::move(speeds_kmh)) {}

std::vector<double> OracleForecaster::forecast(std::size_t step, double current_kmh,
                                               std::size_t horizon) {
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 1; h <= horizon; ++h) {
    const std::size_t idx = step + h;
    if (idx < speeds_.size()) {
      out.push_back(speeds_[idx]);
    } else {
      out.push_back(speeds_.empty() ? current_kmh : speeds_.back());
    }
  }
  return out;
}

std::vector<EnvironmentSample> assemble_horizon(const DisturbanceTrace& mission, std::size_t step,
                                                double current_kmh,
                                                std::span<const double> forecast_kmh,
                                                std::size_t horizon) {
  if (mission.samples.empty()) throw ValidationError("smpc: empty disturbance trace");
  std::vector<EnvironmentSample> out;
  out.reserve(horizon);
  for (std::size_t s = 0; s < horizon; ++s) {
    const std::size_t idx = std::min(step + s, mission.samples.size() - 1);
    EnvironmentSample env = mission.samples[idx];
    const double speed = s == 0 ? current_kmh : forecast_kmh[s - 1];
    env.air_speed_ms = kmh_to_ms(speed);
    out.push_back(env);
  }
  return out;
}

namespace {

double first_command(const CabinPlant& plant, const StageCost& cost, const Grid& grid,
                     std::span<const EnvironmentSample> horizon_env, const ControllerInput& in) {
  std::vector<CabinStage> stages;
  stages.reserve(horizon_env.size());
  for (const EnvironmentSample& env : horizon_env) stages.emplace_back(plant, env, cost, grid.dt_s);
  std::vector<const DpStage*> views;
  views.reserve(stages.size());
  for (const CabinStage& s : stages) views.push_back(&s);
  const double temp = std::clamp(in.temp_c, grid.temp_axis.front(), grid.temp_axis.back());
  const CabinState x0{temp, grid.q_axis[grid.nearest_q(in.q_prev_w)]};
  return solve(grid, plant.limits(), views, x0).commands.front();
}

}  // namespace

SmpcController::SmpcController(const CabinPlant& plant, StageCost cost, Grid grid,
                               SmpcConfig config, std::shared_ptr<const DisturbanceTrace> mission,
                               std::unique_ptr<SpeedForecaster> forecaster)
    : plant_(&plant),
      cost_(cost),
      grid_(std::move(grid)),
      config_(config),
      mission_(std::move(mission)),
      forecaster_(std::move(forecaster)) {
  if (config_.horizon == 0) throw ValidationError("smpc: horizon must be >= 1");
  if (!mission_ || !forecaster_) throw ValidationError("smpc: missing mission or forecaster");
  cost_.validate();
  grid_.validate(plant.limits());
}

double SmpcController::command(const ControllerInput& in) {
  std::size_t horizon = config_.horizon;
  if (config_.shrink_at_end && in.step < mission_->samples.size()) {
    horizon = std::min(horizon, mission_->samples.size() - in.step);
  }
  const std::vector<double> speeds =
      horizon > 1 ? forecaster_->forecast(in.step, in.speed_kmh, horizon - 1) : std::vector<double>{};
  const std::vector<EnvironmentSample> env =
      assemble_horizon(*mission_, in.step, in.speed_kmh, speeds, horizon);
  return first_command(*plant_, cost_, grid_, env, in);
}

double smpc_step(const ControllerInput& in, const CabinPlant& plant,
                 const TransitionMatrix& predictor, const StageCost& cost, const Grid& grid,
                 std::size_t horizon, const DisturbanceTrace& mission) {
  if (horizon == 0) throw ValidationError("smpc: horizon must be >= 1");
  const std::vector<double> speeds =
      horizon > 1 ? predict(predictor, in.speed_kmh, horizon - 1).speeds_kmh : std::vector<double>{};
  const std::vector<EnvironmentSample> env =
      assemble_horizon(mission, in.step, in.speed_kmh, speeds, horizon);
  return first_command(plant, cost, grid, env, in);
}

}  // namespace evac
