#pragma once

// First-order Markov model of vehicle speed over uniform speed bins, fitted
// from 1 Hz driving-cycle traces, and chained multi-step prediction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace evac {

class VelocityQuantizer {
 public:
  explicit VelocityQuantizer(double bin_width_kmh = 2.0, double v_max_kmh = 120.0);

  std::size_t quantize(double speed_kmh) const;
  double dequantize(std::size_t state) const;  // bin midpoint

  double bin_width() const { return bin_width_; }
  double v_max() const { return v_max_; }
  std::size_t num_states() const { return num_states_; }

  friend bool operator==(const VelocityQuantizer&, const VelocityQuantizer&) = default;

 private:
  double bin_width_;
  double v_max_;
  std::size_t num_states_;
};

using SpeedTrace = std::vector<double>;  // km/h at 1 s

class TransitionMatrix {
 public:
  TransitionMatrix() : TransitionMatrix(VelocityQuantizer{}) {}
  explicit TransitionMatrix(VelocityQuantizer quantizer);

  // Counts consecutive-sample transitions pooled over all traces; no
  // transition is counted across trace boundaries.
  static TransitionMatrix fit(std::span<const SpeedTrace> traces, const VelocityQuantizer& q);

  // Rebuilds a matrix from raw transition counts (row-major, p x p).
  static TransitionMatrix from_counts(const VelocityQuantizer& q, std::vector<std::uint64_t> counts);

  const VelocityQuantizer& quantizer() const { return quantizer_; }
  std::size_t size() const { return quantizer_.num_states(); }

  std::uint64_t count(std::size_t from, std::size_t to) const { return counts_[from * size() + to]; }
  std::uint64_t row_total(std::size_t from) const { return totals_[from]; }
  bool has_row(std::size_t from) const { return totals_[from] > 0; }
  double probability(std::size_t from, std::size_t to) const;
  std::span<const double> row(std::size_t from) const {
    return {probabilities_.data() + from * size(), size()};
  }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::span<const double> probabilities() const { return probabilities_; }

 private:
  void normalize();

  VelocityQuantizer quantizer_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> totals_;
  std::vector<double> probabilities_;
};

enum class PredictionMode { argmax, expectation, sample };

struct SpeedPrediction {
  std::vector<double> speeds_kmh;   // length == horizon
  std::vector<std::size_t> states;
  std::size_t fallback_steps = 0;   // steps that held the state on an empty row

  bool used_fallback() const { return fallback_steps > 0; }
};

// Chains one-step predictions from the current speed. Argmax ties go to the
// lowest state index. The seed is only used in sample mode.
SpeedPrediction predict(const TransitionMatrix& matrix, double current_kmh, std::size_t horizon,
                        PredictionMode mode = PredictionMode::argmax, std::uint64_t seed = 0);

// Normalized joint histogram of (speed, acceleration) over consecutive
// samples. Speed bins start at 0 with the given width; acceleration bins are
// centred on integer multiples of their width.
struct SpeedAccelHistogram {
  double speed_bin_kmh = 2.0;
  double accel_bin_kmh_s = 0.5;
  int accel_index_min = 0;           // accel bin of column 0
  std::size_t speed_bins = 0;
  std::size_t accel_bins = 0;
  std::vector<double> density;       // speed-major, sums to 1

  double at(std::size_t speed_bin, int accel_index) const;
  double accel_center(std::size_t column) const {
    return (accel_index_min + static_cast<int>(column)) * accel_bin_kmh_s;
  }
};

SpeedAccelHistogram vel_accel_density(std::span<const SpeedTrace> traces,
                                      double speed_bin_kmh = 2.0, double accel_bin_kmh_s = 0.5);

}  // namespace evac
