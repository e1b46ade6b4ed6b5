#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evac {

// Piecewise-linear lookup along one sorted axis. Queries outside the axis
// clamp to the end nodes.
class Axis {
 public:
  Axis() = default;
  explicit Axis(std::vector<double> nodes);

  struct Bracket {
    std::size_t lower = 0;
    double weight = 0.0;  // of the upper node
    bool clamped = false;
  };

  Bracket locate(double x) const;
  std::span<const double> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
};

}  // namespace evac
