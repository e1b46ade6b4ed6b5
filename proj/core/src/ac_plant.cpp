#include "evac/ac_plant.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "evac/errors.hpp"

namespace evac {

CopMap::CopMap(std::vector<double> cabin_axis, std::vector<double> ambient_axis,
               std::vector<double> base_values, std::vector<double> plr_axis,
               std::vector<double> plr_factor)
    : cabin_axis_(std::move(cabin_axis)),
      ambient_axis_(std::move(ambient_axis)),
      base_values_(std::move(base_values)),
      plr_axis_(std::move(plr_axis)),
      plr_factor_(std::move(plr_factor)) {
  if (base_values_.size() != cabin_axis_.size() * ambient_axis_.size()) {
    throw ValidationError("cop map: base grid size does not match its axes");
  }
  if (plr_factor_.size() != plr_axis_.size()) {
    throw ValidationError("cop map: PLR factor size does not match its axis");
  }
}

CopMap::CopMap(const CopMap& other)
    : cabin_axis_(other.cabin_axis_),
      ambient_axis_(other.ambient_axis_),
      base_values_(other.base_values_),
      plr_axis_(other.plr_axis_),
      plr_factor_(other.plr_factor_),
      clamp_warned_(other.clamp_warned_.load()) {}

CopMap& CopMap::operator=(const CopMap& other) {
  if (this != &other) {
    cabin_axis_ = other.cabin_axis_;
    ambient_axis_ = other.ambient_axis_;
    base_values_ = other.base_values_;
    plr_axis_ = other.plr_axis_;
    plr_factor_ = other.plr_factor_;
    clamp_warned_.store(other.clamp_warned_.load());
  }
  return *this;
}

void CopMap::note_clamp() const {
  if (!clamp_warned_.exchange(true, std::memory_order_relaxed)) {
    std::clog << "warning: COP map queried outside its tabulated range; clamping to the edge\n";
  }
}

double CopMap::base(double cabin_c, double ambient_c) const {
  const Axis::Bracket r = cabin_axis_.locate(cabin_c);
  const Axis::Bracket c = ambient_axis_.locate(ambient_c);
  if (r.clamped || c.clamped) note_clamp();
  const std::size_t cols = ambient_axis_.size();
  const std::size_t r1 = std::min(r.lower + 1, cabin_axis_.size() - 1);
  const std::size_t c1 = std::min(c.lower + 1, cols - 1);
  const double v00 = base_values_[r.lower * cols + c.lower];
  const double v01 = base_values_[r.lower * cols + c1];
  const double v10 = base_values_[r1 * cols + c.lower];
  const double v11 = base_values_[r1 * cols + c1];
  const double low = v00 + c.weight * (v01 - v00);
  const double high = v10 + c.weight * (v11 - v10);
  return low + r.weight * (high - low);
}

double CopMap::plr_factor(double plr) const {
  const Axis::Bracket b = plr_axis_.locate(plr);
  if (b.clamped) note_clamp();
  const std::size_t hi = std::min(b.lower + 1, plr_axis_.size() - 1);
  return plr_factor_[b.lower] + b.weight * (plr_factor_[hi] - plr_factor_[b.lower]);
}

void CopMap::validate() const {
  if (cabin_axis_.size() == 0 || ambient_axis_.size() == 0 || plr_axis_.size() == 0) {
    throw ValidationError("cop map: empty axis");
  }
  for (double v : base_values_) {
    if (!(v > 0.0)) throw ValidationError("cop map: base COP values must be > 0");
  }
  for (double v : plr_factor_) {
    if (!(v > 0.0)) throw ValidationError("cop map: PLR factors must be > 0");
  }
  const std::size_t rows = cabin_axis_.size();
  const std::size_t cols = ambient_axis_.size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j + 1 < cols && base_node(i, j + 1) > base_node(i, j)) {
        throw ValidationError("cop map: COP must not increase with ambient temperature");
      }
      if (i + 1 < rows && base_node(i + 1, j) < base_node(i, j)) {
        throw ValidationError("cop map: COP must not decrease with cabin temperature");
      }
    }
  }
  if (plr_axis_.front() < 0.0 || plr_axis_.back() > 1.0) {
    throw ValidationError("cop map: PLR axis must lie within [0, 1]");
  }
  // The factor is piecewise linear, so its extremes over [0.4, 0.8] sit at
  // the interval ends or at interior nodes.
  double lo = std::min(plr_factor(0.4), plr_factor(0.8));
  double hi = std::max(plr_factor(0.4), plr_factor(0.8));
  for (std::size_t k = 0; k < plr_axis_.size(); ++k) {
    const double x = plr_axis_.nodes()[k];
    if (x > 0.4 && x < 0.8) {
      lo = std::min(lo, plr_factor_[k]);
      hi = std::max(hi, plr_factor_[k]);
    }
  }
  if ((hi - lo) > 0.05 * hi) {
    throw ValidationError("cop map: PLR factor varies by more than 5% over [0.4, 0.8]");
  }
}

void PlantLimits::validate() const {
  if (!(q_cool_min_w >= 0.0 && q_cool_min_w < q_cool_max_w && q_cool_max_w <= nominal_capacity_w)) {
    throw ValidationError("plant: require 0 <= q_cool_min < q_cool_max <= nominal capacity");
  }
  if (!(rate_limit_w_s > 0.0)) throw ValidationError("plant: rate limit must be > 0");
  if (!(compressor_speed_min_rpm < compressor_speed_max_rpm)) {
    throw ValidationError("plant: compressor speed range is empty");
  }
}

double partial_load_ratio(double q_cool_w, const PlantLimits& limits) {
  if (!(q_cool_w >= 0.0 && q_cool_w <= limits.nominal_capacity_w)) {
    throw DomainError("partial_load_ratio: cooling capacity outside [0, nominal]");
  }
  return q_cool_w / limits.nominal_capacity_w;
}

double cop(const CopMap& map, double cabin_c, double ambient_c, double plr) {
  return map(cabin_c, ambient_c, plr);
}

double electric_power(double q_cool_w, double cop) {
  if (!(cop > 0.0)) throw DomainError("electric_power: COP must be > 0");
  return q_cool_w / cop;
}

double compressor_speed(double q_cool_w, const PlantLimits& limits) {
  const double plr = std::clamp(q_cool_w / limits.nominal_capacity_w, 0.0, 1.0);
  const double rpm = limits.compressor_speed_min_rpm +
                     plr * (limits.compressor_speed_max_rpm - limits.compressor_speed_min_rpm);
  return std::clamp(rpm, limits.compressor_speed_min_rpm, limits.compressor_speed_max_rpm);
}

double clamp_command(double q_prev_w, double q_requested_w, double dt_s, const PlantLimits& limits) {
  const double step = limits.rate_limit_w_s * dt_s;
  const double lo = std::max(q_prev_w - step, limits.q_cool_min_w);
  const double hi = std::min(q_prev_w + step, limits.q_cool_max_w);
  if (lo > hi) return std::clamp(q_prev_w, limits.q_cool_min_w, limits.q_cool_max_w);
  return std::clamp(q_requested_w, lo, hi);
}

}  // namespace evac
