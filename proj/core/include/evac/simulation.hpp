#pragma once

// Closed-loop simulation of cabin plant and controller over a mission, and
// the comparison metrics computed from the resulting trace.

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "evac/cabin_plant.hpp"
#include "evac/controllers.hpp"
#include "evac/dp.hpp"

namespace evac {

struct Mission {
  std::string name;
  std::shared_ptr<const DisturbanceTrace> disturbances;  // one entry per step
  double initial_temp_c = 40.0;
  double initial_q_w = 0.0;
  double dt_s = 1.0;

  std::size_t size() const { return disturbances ? disturbances->samples.size() : 0; }
  void validate() const;
};

// Combines a speed trace (km/h per step) and per-step ambient/solar values.
Mission make_mission(std::string name, std::span<const double> speed_kmh,
                     std::span<const double> ambient_c, std::span<const double> solar_wm2,
                     double initial_temp_c = 40.0, double initial_q_w = 0.0, double dt_s = 1.0);

struct TraceRow {
  double time_s = 0.0;
  double speed_kmh = 0.0;
  double ambient_c = 0.0;
  double solar_wm2 = 0.0;
  double temp_c = 0.0;       // at the start of the step
  double q_cool_w = 0.0;     // applied over the step
  double power_w = 0.0;
  double cop = 0.0;
  ThermalLoads loads;        // at the start-of-step temperature
  double energy_j = 0.0;     // cumulative, including this step
};

struct SimulationTrace {
  std::string mission;
  std::string controller;
  double dt_s = 1.0;
  std::vector<TraceRow> rows;
  double final_temp_c = 0.0;
};

// Per step: query the controller, clamp the command to the plant limits,
// draw power at the start-of-step state, integrate the cabin ODE with RK4.
// Throws DomainError naming the step when the state becomes non-finite.
SimulationTrace run(const Mission& mission, Controller& controller, const CabinPlant& plant);

struct RunMetrics {
  double total_energy_j = 0.0;
  double mean_temp_c = 0.0;
  double temp_std_c = 0.0;               // population standard deviation
  std::optional<double> saving;          // 1 - energy / baseline energy
};

struct MetricsOptions {
  // Leading seconds excluded from the temperature statistics. Zero keeps the
  // pull-down transient in.
  double skip_initial_s = 0.0;
};

// Throws ValidationError on an empty trace.
RunMetrics metrics(const SimulationTrace& trace, const SimulationTrace* baseline = nullptr,
                   const MetricsOptions& options = {});

// Sum of stage costs along the trace.
double trace_cost(const SimulationTrace& trace, const StageCost& cost);

std::vector<double> scale_cycle(std::span<const double> speed_kmh, double factor);

// Columns: time_s,speed_kmh,ambient_c,solar_wm2,cabin_c,q_cool_w,power_w,cop,
// q_conduction_w,q_radiation_w,q_occupants_w,q_ventilation_w,energy_j
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

}  // namespace evac
