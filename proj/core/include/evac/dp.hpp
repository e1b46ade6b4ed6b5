#pragma once

// Finite-horizon dynamic programming over a discretized cabin temperature
// and cooling-capacity grid. The cooling capacity is both the second state
// (previous command, for the rate limit) and the control.
//
// Backward induction stores a value per (stage, temperature node, capacity
// node). Successor temperatures that fall between nodes are valued by linear
// interpolation along the temperature axis; successors outside the axis take
// the edge value. Capacities are grid points by construction. The forward
// pass starts from the exact (possibly off-grid) initial temperature and
// re-evaluates the stage models at continuous temperatures.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evac/ac_plant.hpp"
#include "evac/axis.hpp"
#include "evac/cabin_plant.hpp"
#include "evac/thermal_load.hpp"

namespace evac {

struct Grid {
  std::vector<double> temp_axis;
  std::vector<double> q_axis;
  double dt_s = 1.0;

  static Grid uniform(double temp_min, double temp_max, double temp_step, double q_min,
                      double q_max, double q_step, double dt_s = 1.0);

  void validate(const PlantLimits& limits) const;
  std::size_t nearest_q(double q_w) const;
};

struct StageCost {
  double energy_weight = 1.0;      // per J of electric energy
  double comfort_weight = 30000.0; // per degC^2 * s
  double target_c = 23.0;

  void validate() const;
};

double stage_cost(double power_w, double temp_c, const StageCost& cost, double dt_s);

// One stage of the problem: successor temperature and stage cost as
// functions of the temperature at the start of the stage and the command.
class DpStage {
 public:
  virtual ~DpStage() = default;
  virtual double next_temp(double temp_c, double q_cmd_w) const = 0;
  virtual double cost(double temp_c, double q_cmd_w) const = 0;
};

// The cabin ODE under one environment sample, with the stage cost of the
// electric power drawn at the start-of-stage temperature.
class CabinStage final : public DpStage {
 public:
  CabinStage(const CabinPlant& plant, const EnvironmentSample& env, const StageCost& cost,
             double dt_s);

  double next_temp(double temp_c, double q_cmd_w) const override;
  double cost(double temp_c, double q_cmd_w) const override;

 private:
  const CabinPlant* plant_;
  LoadModel loads_;
  double ambient_c_;
  StageCost cost_;
  double dt_s_;
};

struct TerminalBand {
  double min_c;
  double max_c;
};

class Policy {
 public:
  static constexpr std::int32_t kNone = -1;

  Policy() = default;
  Policy(std::size_t stages, std::size_t temps, std::size_t qs)
      : stages_(stages), temps_(temps), qs_(qs), index_(stages * temps * qs, kNone) {}

  std::size_t stages() const { return stages_; }
  // Command index for (stage, temperature node, previous-capacity node), or
  // kNone where every feasible command leads to an infinite value.
  std::int32_t command_index(std::size_t stage, std::size_t temp, std::size_t q_prev) const {
    return index_[(stage * qs_ + q_prev) * temps_ + temp];
  }
  void set(std::size_t stage, std::size_t temp, std::size_t q_prev, std::int32_t j) {
    index_[(stage * qs_ + q_prev) * temps_ + temp] = j;
  }

 private:
  std::size_t stages_ = 0;
  std::size_t temps_ = 0;
  std::size_t qs_ = 0;
  std::vector<std::int32_t> index_;
};

struct DpSolution {
  Policy policy;
  std::vector<double> temps;        // stages + 1 entries, continuous
  std::vector<double> commands;     // stages entries, grid values
  std::vector<double> stage_costs;
  double total_cost = 0.0;          // sum of stage costs along the trajectory
  double value_estimate = 0.0;      // interpolated value at x0

  // Value table, kept when requested: value(stage, temp node, q node).
  std::vector<double> values;
  std::size_t temp_nodes = 0;
  std::size_t q_nodes = 0;
  double value(std::size_t stage, std::size_t temp, std::size_t q) const {
    return values[(stage * q_nodes + q) * temp_nodes + temp];
  }
};

struct SolveOptions {
  std::optional<TerminalBand> terminal;
  bool keep_values = false;
  unsigned threads = 1;
};

// Throws DomainError when x0 lies outside the temperature axis or no finite
// cost path exists from it.
DpSolution solve(const Grid& grid, const PlantLimits& limits, std::span<const DpStage* const> stages,
                 const CabinState& x0, const SolveOptions& options = {});

}  // namespace evac
