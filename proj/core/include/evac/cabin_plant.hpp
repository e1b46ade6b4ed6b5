#pragma once

// The controlled system: cabin thermal model plus AC plant. Shared by the
// simulator and the DP stage models so both see identical dynamics and costs.

#include "evac/ac_plant.hpp"
#include "evac/thermal_load.hpp"

namespace evac {

struct CabinState {
  double temp_c = 0.0;
  double q_cool_w = 0.0;
};

class CabinPlant {
 public:
  CabinPlant(VehicleThermalConfig vehicle, CopMap cop_map, PlantLimits limits);

  const VehicleThermalConfig& vehicle() const { return vehicle_; }
  const CopMap& cop_map() const { return cop_map_; }
  const PlantLimits& limits() const { return limits_; }
  double heat_capacity() const { return heat_capacity_; }

  // Cabin temperature after dt with the cooling capacity held constant,
  // integrated with one RK4 step.
  double integrate(const LoadModel& loads, double temp_c, double q_cool_w, double dt_s) const;

  double cop_at(double temp_c, double ambient_c, double q_cool_w) const;
  double power(double temp_c, double ambient_c, double q_cool_w) const;

  // Full state update. Throws DomainError when q_cmd violates the capacity
  // bounds or the rate limit relative to state.q_cool_w.
  CabinState transition(const CabinState& state, double q_cmd_w, const EnvironmentSample& env,
                        double dt_s) const;

  bool command_feasible(double q_prev_w, double q_cmd_w, double dt_s) const;

 private:
  VehicleThermalConfig vehicle_;
  CopMap cop_map_;
  PlantLimits limits_;
  double heat_capacity_;
};

}  // namespace evac
