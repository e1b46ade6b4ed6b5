#include "evac/synthetic_cycles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "evac/errors.hpp"
#include "evac/simulation.hpp"

namespace evac {

namespace {

constexpr std::uint64_t kReferenceSeed = 68;

double round_tenth(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

CycleProfile urban_profile() {
  CycleProfile p;
  p.cruise_min_kmh = 20.0;
  p.cruise_max_kmh = 75.0;
  p.cruise_min_s = 15.0;
  p.cruise_max_s = 70.0;
  p.idle_min_s = 5.0;
  p.idle_max_s = 35.0;
  return p;
}

CycleProfile highway_profile() {
  CycleProfile p;
  p.cruise_min_kmh = 70.0;
  p.cruise_max_kmh = 115.0;
  p.accel_min_kmh_s = 1.5;
  p.accel_max_kmh_s = 3.5;
  p.decel_min_kmh_s = 2.0;
  p.decel_max_kmh_s = 4.0;
  p.cruise_min_s = 60.0;
  p.cruise_max_s = 300.0;
  p.idle_min_s = 2.0;
  p.idle_max_s = 10.0;
  return p;
}

SpeedTrace generate_cycle(const CycleProfile& profile, std::size_t length_s, std::uint64_t seed) {
  if (profile.cruise_min_kmh <= 0.0 || profile.cruise_max_kmh < profile.cruise_min_kmh ||
      profile.accel_min_kmh_s <= 0.0 || profile.decel_min_kmh_s <= 0.0) {
    throw ValidationError("cycle profile: invalid speed or acceleration ranges");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::normal_distribution<double> noise(0.0, profile.fluctuation_kmh);

  SpeedTrace v;
  v.reserve(length_s + 400);
  while (v.size() < length_s) {
    const auto idle = static_cast<std::size_t>(uniform(profile.idle_min_s, profile.idle_max_s));
    v.insert(v.end(), idle, 0.0);

    const double cruise = uniform(profile.cruise_min_kmh, profile.cruise_max_kmh);
    const double accel = uniform(profile.accel_min_kmh_s, profile.accel_max_kmh_s);
    double speed = 0.0;
    while (speed < cruise) {
      speed = std::min(cruise, speed + accel);
      v.push_back(speed);
    }
    const auto hold = static_cast<std::size_t>(uniform(profile.cruise_min_s, profile.cruise_max_s));
    const double band = 0.15 * cruise;
    for (std::size_t i = 0; i < hold; ++i) {
      // Mean-reverting walk around the cruise speed.
      speed += 0.2 * (cruise - speed) + noise(rng);
      speed = std::clamp(speed, cruise - band, cruise + band);
      v.push_back(speed);
    }
    const double decel = uniform(profile.decel_min_kmh_s, profile.decel_max_kmh_s);
    while (speed > 0.0) {
      speed = std::max(0.0, speed - decel);
      v.push_back(speed);
    }
  }
  v.resize(length_s);
  // Bring the truncated tail to rest at the comfortable deceleration.
  if (!v.empty()) {
    v.back() = 0.0;
    for (std::size_t i = v.size() - 1; i-- > 0;) {
      const double cap = v[i + 1] + profile.decel_min_kmh_s;
      if (v[i] <= cap) break;
      v[i] = cap;
    }
  }
  for (double& s : v) s = round_tenth(std::max(0.0, s));
  return v;
}

SpeedTrace urban_reference_cycle() { return generate_cycle(urban_profile(), 1370, kReferenceSeed); }

std::vector<SpeedTrace> urban_corpus(std::size_t count, double factor, std::uint64_t seed) {
  std::vector<SpeedTrace> out;
  out.reserve(count);
  for (std::uint64_t s = seed; out.size() < count; ++s) {
    if (s == kReferenceSeed) continue;
    SpeedTrace c = scale_cycle(generate_cycle(urban_profile(), 1370, s), factor);
    for (double& x : c) x = round_tenth(x);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace evac
