#pragma once

// Deterministic synthetic driving cycles built from microtrips
// (idle, accelerate, cruise with fluctuation, brake to a stop). Used as
// stand-ins for standard cycles and measured corpora, which are not shipped.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evac/velocity_markov.hpp"

namespace evac {

struct CycleProfile {
  double cruise_min_kmh = 20.0;
  double cruise_max_kmh = 60.0;
  double accel_min_kmh_s = 2.0;
  double accel_max_kmh_s = 5.0;
  double decel_min_kmh_s = 3.0;
  double decel_max_kmh_s = 6.0;
  double cruise_min_s = 10.0;
  double cruise_max_s = 60.0;
  double idle_min_s = 5.0;
  double idle_max_s = 30.0;
  double fluctuation_kmh = 1.5;   // std of the cruise random walk step
};

CycleProfile urban_profile();
CycleProfile highway_profile();

// Speeds at 1 s, rounded to 0.1 km/h, starting and ending at rest.
SpeedTrace generate_cycle(const CycleProfile& profile, std::size_t length_s, std::uint64_t seed);

// 1370 s urban cycle with UDDS-like statistics (mean near 29 km/h, peak near
// 78 km/h, 17 stops). Fixed seed.
SpeedTrace urban_reference_cycle();

// Training corpus: count cycles from the urban profile with distinct seeds
// (none equal to the reference cycle's), each scaled by factor.
std::vector<SpeedTrace> urban_corpus(std::size_t count, double factor, std::uint64_t seed = 1000);

}  // namespace evac
