#include "evac/velocity_markov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "evac/errors.hpp"

namespace evac {

VelocityQuantizer::VelocityQuantizer(double bin_width_kmh, double v_max_kmh)
    : bin_width_(bin_width_kmh), v_max_(v_max_kmh), num_states_(0) {
  if (!(bin_width_ > 0.0) || !(v_max_ > 0.0)) {
    throw ValidationError("quantizer: bin width and v_max must be > 0");
  }
  num_states_ = static_cast<std::size_t>(std::ceil(v_max_ / bin_width_ - 1e-12));
}

std::size_t VelocityQuantizer::quantize(double speed_kmh) const {
  if (!(speed_kmh >= 0.0)) throw DomainError("quantize: speed must be >= 0");
  const double bin = std::floor(speed_kmh / bin_width_);
  if (bin >= static_cast<double>(num_states_ - 1)) return num_states_ - 1;
  return static_cast<std::size_t>(bin);
}

double VelocityQuantizer::dequantize(std::size_t state) const {
  return (static_cast<double>(state) + 0.5) * bin_width_;
}

TransitionMatrix::TransitionMatrix(VelocityQuantizer quantizer)
    : quantizer_(quantizer),
      counts_(quantizer_.num_states() * quantizer_.num_states(), 0),
      totals_(quantizer_.num_states(), 0),
      probabilities_(quantizer_.num_states() * quantizer_.num_states(), 0.0) {}

TransitionMatrix TransitionMatrix::fit(std::span<const SpeedTrace> traces,
                                       const VelocityQuantizer& q) {
  TransitionMatrix m(q);
  std::size_t transitions = 0;
  const std::size_t p = q.num_states();
  for (const SpeedTrace& trace : traces) {
    for (std::size_t t = 1; t < trace.size(); ++t) {
      ++m.counts_[q.quantize(trace[t - 1]) * p + q.quantize(trace[t])];
      ++transitions;
    }
  }
  if (transitions == 0) {
    throw ValidationError("fit: corpus contains no trace with at least two samples");
  }
  m.normalize();
  return m;
}

TransitionMatrix TransitionMatrix::from_counts(const VelocityQuantizer& q,
                                               std::vector<std::uint64_t> counts) {
  TransitionMatrix m(q);
  if (counts.size() != m.counts_.size()) {
    throw ValidationError("transition counts do not match the quantizer size");
  }
  m.counts_ = std::move(counts);
  m.normalize();
  return m;
}

void TransitionMatrix::normalize() {
  const std::size_t p = size();
  for (std::size_t i = 0; i < p; ++i) {
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < p; ++j) total += counts_[i * p + j];
    totals_[i] = total;
    for (std::size_t j = 0; j < p; ++j) {
      probabilities_[i * p + j] =
          total == 0 ? 0.0 : static_cast<double>(counts_[i * p + j]) / static_cast<double>(total);
    }
  }
}

double TransitionMatrix::probability(std::size_t from, std::size_t to) const {
  return probabilities_[from * size() + to];
}

namespace {

std::size_t argmax_state(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;
  }
  return best;
}

std::size_t expected_state(std::span<const double> row, const VelocityQuantizer& q) {
  double mean = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) mean += row[j] * q.dequantize(j);
  return q.quantize(mean);
}

std::size_t sampled_state(std::span<const double> row, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] <= 0.0) continue;
    cumulative += row[j];
    last_nonzero = j;
    if (u < cumulative) return j;
  }
  return last_nonzero;
}

}  // namespace

SpeedPrediction predict(const TransitionMatrix& matrix, double current_kmh, std::size_t horizon,
                        PredictionMode mode, std::uint64_t seed) {
  if (horizon == 0) throw DomainError("predict: horizon must be >= 1");
  const VelocityQuantizer& q = matrix.quantizer();
  std::mt19937_64 rng(seed);
  SpeedPrediction out;
  out.speeds_kmh.reserve(horizon);
  out.states.reserve(horizon);
  std::size_t state = q.quantize(current_kmh);
  for (std::size_t h = 0; h < horizon; ++h) {
    if (!matrix.has_row(state)) {
      ++out.fallback_steps;
    } else {
      const auto row = matrix.row(state);
      switch (mode) {
        case PredictionMode::argmax: state = argmax_state(row); break;
        case PredictionMode::expectation: state = expected_state(row, q); break;
        case PredictionMode::sample: state = sampled_state(row, rng); break;
      }
    }
    out.states.push_back(state);
    out.speeds_kmh.push_back(q.dequantize(state));
  }
  return out;
}

double SpeedAccelHistogram::at(std::size_t speed_bin, int accel_index) const {
  const int col = accel_index - accel_index_min;
  if (speed_bin >= speed_bins || col < 0 || static_cast<std::size_t>(col) >= accel_bins) return 0.0;
  return density[speed_bin * accel_bins + static_cast<std::size_t>(col)];
}

SpeedAccelHistogram vel_accel_density(std::span<const SpeedTrace> traces, double speed_bin_kmh,
                                      double accel_bin_kmh_s) {
  if (!(speed_bin_kmh > 0.0) || !(accel_bin_kmh_s > 0.0)) {
    throw ValidationError("density: bin widths must be > 0");
  }
  std::map<std::pair<std::size_t, int>, std::size_t> cells;
  std::size_t samples = 0;
  for (const SpeedTrace& trace : traces) {
    for (std::size_t t = 0; t + 1 < trace.size(); ++t) {
      if (trace[t] < 0.0 || trace[t + 1] < 0.0) throw DomainError("density: negative speed");
      const auto vbin = static_cast<std::size_t>(std::floor(trace[t] / speed_bin_kmh));
      const int abin = static_cast<int>(std::lround((trace[t + 1] - trace[t]) / accel_bin_kmh_s));
      ++cells[{vbin, abin}];
      ++samples;
    }
  }
  SpeedAccelHistogram h;
  h.speed_bin_kmh = speed_bin_kmh;
  h.accel_bin_kmh_s = accel_bin_kmh_s;
  if (samples == 0) return h;
  int amin = 0;
  int amax = 0;
  std::size_t vmax = 0;
  bool first = true;
  for (const auto& [key, n] : cells) {
    vmax = std::max(vmax, key.first);
    amin = first ? key.second : std::min(amin, key.second);
    amax = first ? key.second : std::max(amax, key.second);
    first = false;
  }
  h.accel_index_min = amin;
  h.speed_bins = vmax + 1;
  h.accel_bins = static_cast<std::size_t>(amax - amin + 1);
  h.density.assign(h.speed_bins * h.accel_bins, 0.0);
  for (const auto& [key, n] : cells) {
    h.density[key.first * h.accel_bins + static_cast<std::size_t>(key.second - amin)] =
        static_cast<double>(n) / static_cast<double>(samples);
  }
  return h;
}

}  // namespace evac
