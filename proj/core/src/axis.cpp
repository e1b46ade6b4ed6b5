#include "evac/axis.hpp"

#include <algorithm>

#include "evac/errors.hpp"

namespace evac {

Axis::Axis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("axis must have at least one node");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw ValidationError("axis nodes must be strictly increasing");
  }
}

Axis::Bracket Axis::locate(double x) const {
  if (nodes_.size() == 1) return {0, 0.0, x != nodes_.front()};
  if (x <= nodes_.front()) return {0, 0.0, x < nodes_.front()};
  if (x >= nodes_.back()) return {nodes_.size() - 2, 1.0, x > nodes_.back()};
  const auto upper = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const std::size_t lo = static_cast<std::size_t>(upper - nodes_.begin()) - 1;
  const double w = (x - nodes_[lo]) / (nodes_[lo + 1] - nodes_[lo]);
  return {lo, w, false};
}

}  // namespace evac
