#pragma once

// AC plant: coefficient-of-performance map, plant limits, and the mapping
// from cooling capacity to electric power.

#include <atomic>
#include <cstddef>
#include <span>
#include <vector>

#include "evac/axis.hpp"

namespace evac {

// COP as base(T_in, T_out) * factor(PLR): bilinear on the base grid, linear
// on the load-ratio factor.
class CopMap {
 public:
  CopMap() = default;
  // base_values is row-major with one row per cabin temperature node.
  CopMap(std::vector<double> cabin_axis, std::vector<double> ambient_axis,
         std::vector<double> base_values, std::vector<double> plr_axis,
         std::vector<double> plr_factor);
  CopMap(const CopMap& other);
  CopMap& operator=(const CopMap& other);

  double base(double cabin_c, double ambient_c) const;
  double plr_factor(double plr) const;
  double operator()(double cabin_c, double ambient_c, double plr) const {
    return base(cabin_c, ambient_c) * plr_factor(plr);
  }

  const Axis& cabin_axis() const { return cabin_axis_; }
  const Axis& ambient_axis() const { return ambient_axis_; }
  const Axis& plr_axis() const { return plr_axis_; }
  std::span<const double> base_values() const { return base_values_; }
  std::span<const double> plr_values() const { return plr_factor_; }
  double base_node(std::size_t cabin_index, std::size_t ambient_index) const {
    return base_values_[cabin_index * ambient_axis_.size() + ambient_index];
  }

  // Positivity, the documented monotonicity directions and the flatness of
  // the factor over PLR in [0.4, 0.8]. Throws ValidationError.
  void validate() const;

  // Whether any query so far fell outside the tabulated range.
  bool clamped_query_seen() const { return clamp_warned_.load(std::memory_order_relaxed); }

 private:
  void note_clamp() const;

  Axis cabin_axis_;
  Axis ambient_axis_;
  std::vector<double> base_values_;
  Axis plr_axis_;
  std::vector<double> plr_factor_;
  mutable std::atomic<bool> clamp_warned_{false};
};

struct PlantLimits {
  double q_cool_min_w = 0.0;
  double q_cool_max_w = 6800.0;
  double rate_limit_w_s = 500.0;
  double compressor_speed_min_rpm = 1500.0;
  double compressor_speed_max_rpm = 6500.0;
  double nominal_capacity_w = 6800.0;

  void validate() const;
};

double partial_load_ratio(double q_cool_w, const PlantLimits& limits);

double cop(const CopMap& map, double cabin_c, double ambient_c, double plr);

double electric_power(double q_cool_w, double cop);

double compressor_speed(double q_cool_w, const PlantLimits& limits);

// Clips a request to the rate band around the previous command and to the
// capacity bounds.
double clamp_command(double q_prev_w, double q_requested_w, double dt_s, const PlantLimits& limits);

}  // namespace evac
