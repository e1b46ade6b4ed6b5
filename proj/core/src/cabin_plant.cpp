#include "evac/cabin_plant.hpp"

#include <algorithm>
#include <cmath>

#include "evac/errors.hpp"
#include "evac/rk4.hpp"

namespace evac {

namespace {
// Commands are compared against limits with a small slack so that grid
// values built by repeated addition are not rejected.
constexpr double kCommandSlackW = 1e-6;
}  // namespace

CabinPlant::CabinPlant(VehicleThermalConfig vehicle, CopMap cop_map, PlantLimits limits)
    : vehicle_(std::move(vehicle)),
      cop_map_(std::move(cop_map)),
      limits_(limits),
      heat_capacity_(cabin_heat_capacity(vehicle_.cabin)) {
  vehicle_.validate();
  cop_map_.validate();
  limits_.validate();
}

double CabinPlant::integrate(const LoadModel& loads, double temp_c, double q_cool_w,
                             double dt_s) const {
  const double inv_capacity = 1.0 / heat_capacity_;
  auto derivative = [&](double, double t) { return (loads.total(t) - q_cool_w) * inv_capacity; };
  return rk4_step(derivative, 0.0, temp_c, dt_s);
}

double CabinPlant::cop_at(double temp_c, double ambient_c, double q_cool_w) const {
  const double plr = std::clamp(q_cool_w / limits_.nominal_capacity_w, 0.0, 1.0);
  return cop_map_(temp_c, ambient_c, plr);
}

double CabinPlant::power(double temp_c, double ambient_c, double q_cool_w) const {
  if (q_cool_w <= 0.0) return 0.0;
  return electric_power(q_cool_w, cop_at(temp_c, ambient_c, q_cool_w));
}

bool CabinPlant::command_feasible(double q_prev_w, double q_cmd_w, double dt_s) const {
  return q_cmd_w >= limits_.q_cool_min_w - kCommandSlackW &&
         q_cmd_w <= limits_.q_cool_max_w + kCommandSlackW &&
         std::abs(q_cmd_w - q_prev_w) <= limits_.rate_limit_w_s * dt_s + kCommandSlackW;
}

CabinState CabinPlant::transition(const CabinState& state, double q_cmd_w,
                                  const EnvironmentSample& env, double dt_s) const {
  if (!command_feasible(state.q_cool_w, q_cmd_w, dt_s)) {
    throw DomainError("transition: command violates capacity bounds or rate limit");
  }
  const LoadModel loads(vehicle_, env);
  return CabinState{integrate(loads, state.temp_c, q_cmd_w, dt_s), q_cmd_w};
}

}  // namespace evac
