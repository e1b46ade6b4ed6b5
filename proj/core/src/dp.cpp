#include "evac/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "evac/errors.hpp"

namespace evac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace_by_step(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ValidationError("grid: bad axis range or step");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = lo + step * static_cast<double>(i);
  return axis;
}

double interpolate(std::span<const double> column, const Axis::Bracket& b) {
  const double a = column[b.lower];
  if (b.weight == 0.0) return a;
  const double c = column[b.lower + 1];
  if (b.weight == 1.0) return c;
  if (std::isinf(a) || std::isinf(c)) return kInf;
  return a + b.weight * (c - a);
}

// Runs body(begin, end) over [0, n) split across up to `threads` workers.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace

Grid Grid::uniform(double temp_min, double temp_max, double temp_step, double q_min, double q_max,
                   double q_step, double dt_s) {
  return Grid{linspace_by_step(temp_min, temp_max, temp_step),
              linspace_by_step(q_min, q_max, q_step), dt_s};
}

void Grid::validate(const PlantLimits& limits) const {
  if (temp_axis.empty() || q_axis.empty()) throw ValidationError("grid: empty axis");
  if (!(dt_s > 0.0)) throw ValidationError("grid: dt must be > 0");
  for (std::size_t i = 1; i < temp_axis.size(); ++i) {
    if (!(temp_axis[i] > temp_axis[i - 1])) {
      throw ValidationError("grid: temperature axis must be strictly increasing");
    }
  }
  for (std::size_t i = 1; i < q_axis.size(); ++i) {
    if (!(q_axis[i] > q_axis[i - 1])) {
      throw ValidationError("grid: capacity axis must be strictly increasing");
    }
  }
  if (q_axis.front() < limits.q_cool_min_w - 1e-9 || q_axis.back() > limits.q_cool_max_w + 1e-9) {
    throw ValidationError("grid: capacity axis must lie within the plant bounds");
  }
}

std::size_t Grid::nearest_q(double q_w) const {
  const auto it = std::lower_bound(q_axis.begin(), q_axis.end(), q_w);
  if (it == q_axis.begin()) return 0;
  if (it == q_axis.end()) return q_axis.size() - 1;
  const auto hi = static_cast<std::size_t>(it - q_axis.begin());
  return (q_w - q_axis[hi - 1] <= q_axis[hi] - q_w) ? hi - 1 : hi;
}

void StageCost::validate() const {
  if (energy_weight < 0.0 || comfort_weight < 0.0) {
    throw ValidationError("cost: weights must be >= 0");
  }
  if (energy_weight == 0.0 && comfort_weight == 0.0) {
    throw ValidationError("cost: weights must not both be zero");
  }
}

double stage_cost(double power_w, double temp_c, const StageCost& cost, double dt_s) {
  const double err = temp_c - cost.target_c;
  return (cost.energy_weight * power_w + cost.comfort_weight * err * err) * dt_s;
}

CabinStage::CabinStage(const CabinPlant& plant, const EnvironmentSample& env,
                       const StageCost& cost, double dt_s)
    : plant_(&plant),
      loads_(plant.vehicle(), env),
      ambient_c_(env.ambient_c),
      cost_(cost),
      dt_s_(dt_s) {}

double CabinStage::next_temp(double temp_c, double q_cmd_w) const {
  return plant_->integrate(loads_, temp_c, q_cmd_w, dt_s_);
}

double CabinStage::cost(double temp_c, double q_cmd_w) const {
  return stage_cost(plant_->power(temp_c, ambient_c_, q_cmd_w), temp_c, cost_, dt_s_);
}

DpSolution solve(const Grid& grid, const PlantLimits& limits, std::span<const DpStage* const> stages,
                 const CabinState& x0, const SolveOptions& options) {
  grid.validate(limits);
  const Axis temp_axis(grid.temp_axis);
  const std::size_t nt = grid.temp_axis.size();
  const std::size_t nq = grid.q_axis.size();
  const std::size_t n_stages = stages.size();

  if (!(x0.temp_c >= grid.temp_axis.front() && x0.temp_c <= grid.temp_axis.back())) {
    throw DomainError("solve: initial temperature outside the grid");
  }

  // Feasible command window [lo, hi] for every previous-capacity node.
  const double max_step = limits.rate_limit_w_s * grid.dt_s;
  std::vector<std::size_t> win_lo(nq);
  std::vector<std::size_t> win_hi(nq);
  for (std::size_t k = 0; k < nq; ++k) {
    const double slack = 1e-9 * std::max(1.0, std::abs(grid.q_axis[k]));
    const double lo = grid.q_axis[k] - max_step - slack;
    const double hi = grid.q_axis[k] + max_step + slack;
    win_lo[k] = static_cast<std::size_t>(
        std::lower_bound(grid.q_axis.begin(), grid.q_axis.end(), lo) - grid.q_axis.begin());
    win_hi[k] = static_cast<std::size_t>(
                    std::upper_bound(grid.q_axis.begin(), grid.q_axis.end(), hi) -
                    grid.q_axis.begin()) - 1;
  }

  DpSolution sol;
  sol.policy = Policy(n_stages, nt, nq);
  sol.temp_nodes = nt;
  sol.q_nodes = nq;
  std::vector<double> values((n_stages + 1) * nq * nt, kInf);
  auto value_column = [&](std::size_t stage, std::size_t q) {
    return std::span<double>(values.data() + (stage * nq + q) * nt, nt);
  };

  for (std::size_t q = 0; q < nq; ++q) {
    auto col = value_column(n_stages, q);
    for (std::size_t i = 0; i < nt; ++i) {
      const double t = grid.temp_axis[i];
      const bool ok = !options.terminal ||
                      (t >= options.terminal->min_c && t <= options.terminal->max_c);
      col[i] = ok ? 0.0 : kInf;
    }
  }

  std::vector<double> stage_cost_table(nt * nq);
  std::vector<Axis::Bracket> successor(nt * nq);
  for (std::size_t s = n_stages; s-- > 0;) {
    const DpStage& stage = *stages[s];
    parallel_for(nt, options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const double t = grid.temp_axis[i];
        for (std::size_t j = 0; j < nq; ++j) {
          stage_cost_table[i * nq + j] = stage.cost(t, grid.q_axis[j]);
          successor[i * nq + j] = temp_axis.locate(stage.next_temp(t, grid.q_axis[j]));
        }
      }
    });
    parallel_for(nt, options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = 0; k < nq; ++k) {
        auto col = value_column(s, k);
        for (std::size_t i = begin; i < end; ++i) {
          double best = kInf;
          std::int32_t best_j = Policy::kNone;
          for (std::size_t j = win_lo[k]; j <= win_hi[k]; ++j) {
            const double v = stage_cost_table[i * nq + j] +
                             interpolate(value_column(s + 1, j), successor[i * nq + j]);
            if (v < best) {
              best = v;
              best_j = static_cast<std::int32_t>(j);
            }
          }
          col[i] = best;
          sol.policy.set(s, i, k, best_j);
        }
      }
    });
  }

  // Forward pass from the continuous initial temperature.
  std::size_t k = grid.nearest_q(x0.q_cool_w);
  double t = x0.temp_c;
  sol.temps.reserve(n_stages + 1);
  sol.temps.push_back(t);
  sol.commands.reserve(n_stages);
  sol.stage_costs.reserve(n_stages);
  for (std::size_t s = 0; s < n_stages; ++s) {
    const DpStage& stage = *stages[s];
    double best = kInf;
    std::size_t best_j = win_lo[k];
    double best_cost = 0.0;
    double best_next = t;
    for (std::size_t j = win_lo[k]; j <= win_hi[k]; ++j) {
      const double c = stage.cost(t, grid.q_axis[j]);
      const double next = stage.next_temp(t, grid.q_axis[j]);
      const double v = c + interpolate(value_column(s + 1, j), temp_axis.locate(next));
      if (v < best) {
        best = v;
        best_j = j;
        best_cost = c;
        best_next = next;
      }
    }
    if (std::isinf(best)) {
      throw DomainError("solve: no finite-cost command sequence from the initial state");
    }
    if (s == 0) sol.value_estimate = best;
    sol.commands.push_back(grid.q_axis[best_j]);
    sol.stage_costs.push_back(best_cost);
    sol.total_cost += best_cost;
    t = best_next;
    k = best_j;
    sol.temps.push_back(t);
  }
  if (n_stages == 0) sol.value_estimate = 0.0;
  if (options.keep_values) sol.values = std::move(values);
  return sol;
}

}  // namespace evac
