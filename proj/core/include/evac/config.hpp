#pragma once

// Aggregate experiment configuration and its JSON form. See
// docs/config.md for the schema with units.

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "evac/ac_plant.hpp"
#include "evac/cabin_plant.hpp"
#include "evac/controllers.hpp"
#include "evac/dp.hpp"
#include "evac/thermal_load.hpp"
#include "evac/velocity_markov.hpp"

namespace evac {

struct GridSpec {
  double temp_min_c = 15.0;
  double temp_max_c = 45.0;
  double temp_step_c = 0.25;
  double q_step_w = 100.0;
  double dt_s = 1.0;

  // Capacity axis spans the plant bounds.
  Grid build(const PlantLimits& limits) const;
};

struct SimulationSettings {
  double initial_temp_c = 40.0;
  double initial_q_w = 0.0;
  double stats_skip_s = 0.0;
  // Constant environment used when no environment file is given.
  double ambient_c = 35.0;
  double solar_wm2 = 1000.0;
};

struct SmpcSettings {
  SmpcConfig controller;
  PredictionMode mode = PredictionMode::argmax;
  std::uint64_t seed = 0;
};

struct SweepSettings {
  double duration_s = 1370.0;
};

struct AppConfig {
  VehicleThermalConfig vehicle;
  CopMap cop_map;
  PlantLimits plant;
  StageCost cost;
  GridSpec grid;
  BangBangConfig bangbang;
  SmpcSettings smpc;
  VelocityQuantizer quantizer;
  SimulationSettings simulation;
  SweepSettings sweep;

  CabinPlant make_plant() const { return CabinPlant(vehicle, cop_map, plant); }
  void validate() const;
};

// Representative mid-size sedan. Values are plausible engineering figures,
// not measurements of any particular vehicle.
AppConfig default_config();

// Missing keys take their default_config() values.
AppConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const AppConfig& cfg);

AppConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const AppConfig& cfg);

std::string to_string(PredictionMode mode);
PredictionMode prediction_mode_from_string(const std::string& s);

}  // namespace evac
