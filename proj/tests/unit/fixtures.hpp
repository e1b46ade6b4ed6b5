#pragma once

// Small hand-built configurations shared by the unit tests.

#include <cmath>
#include <numbers>
#include <vector>

#include "evac/ac_plant.hpp"
#include "evac/cabin_plant.hpp"
#include "evac/thermal_load.hpp"

namespace evac::test {

inline VehicleThermalConfig simple_vehicle() {
  VehicleThermalConfig v;
  v.panels = {BodyPanel{"roof", {{0.001, 50.0}, {0.01, 0.04}}, 2.0, 0.5},
              BodyPanel{"sides", {{0.001, 50.0}, {0.008, 0.04}}, 4.0, 0.5}};
  v.windows = {WindowPanel{"windshield", 1.2, std::numbers::pi / 3, 0.5, 0.15, 0.9}};
  v.cabin = CabinAirConfig{1.2, 3.0, 1005.0, 1.0, 0.5, 0.186, 2, 1.0};
  v.interior = InteriorConvection{3.0, 2.0};
  return v;
}

// Constant COP 2.5 everywhere.
inline CopMap flat_cop(double value = 2.5) {
  return CopMap({10.0, 50.0}, {10.0, 50.0}, {value, value, value, value}, {0.0, 1.0}, {1.0, 1.0});
}

inline CabinPlant simple_plant() { return CabinPlant(simple_vehicle(), flat_cop(), PlantLimits{}); }

}  // namespace evac::test
