#pragma once

// Experiment harness: constant-condition sensitivity sweeps and controller
// comparisons over mission sets, with CSV and text-table reports.

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "evac/config.hpp"
#include "evac/simulation.hpp"

namespace evac {

enum class SweepVariable { speed, solar, ambient };

std::string to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& s);

struct SweepSpec {
  SweepVariable variable = SweepVariable::speed;
  std::vector<double> values;
  std::vector<double> targets_c{23.0};
  // Values held constant for the variables not being swept.
  double speed_kmh = 40.0;
  double solar_wm2 = 900.0;
  double ambient_c = 30.0;
  double duration_s = 1370.0;

  // Value and target lists must be non-empty and sorted ascending.
  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  double target_c = 0.0;
  double load_w = 0.0;        // equilibrium load at the target
  double energy_j = 0.0;
  bool unreachable = false;   // load above the plant capacity
};

// Holds the cabin at each target by commanding the instantaneous total load
// (clamped to the plant limits) over a constant-condition mission. Rows come
// back sorted by (value, target) whatever the completion order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const AppConfig& cfg, unsigned threads = 0);

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

// Cabin-temperature tracker used by the sweeps: commands the total load at
// the current temperature.
class LoadFollowingController final : public Controller {
 public:
  LoadFollowingController(const CabinPlant& plant, std::shared_ptr<const DisturbanceTrace> mission);
  std::string_view name() const override { return "load-following"; }
  double command(const ControllerInput& in) override;

 private:
  const CabinPlant* plant_;
  std::shared_ptr<const DisturbanceTrace> mission_;
};

enum class ControllerKind { smpc, dp, bangbang };

std::string to_string(ControllerKind k);
ControllerKind controller_kind_from_string(const std::string& s);

// Inputs shared by every controller built for one mission.
struct ControllerContext {
  const AppConfig* config = nullptr;
  const CabinPlant* plant = nullptr;
  std::shared_ptr<const TransitionMatrix> matrix;  // required for smpc
  bool oracle_forecast = false;                    // smpc uses the true future speeds
  unsigned dp_threads = 1;
};

std::unique_ptr<Controller> make_controller(ControllerKind kind, const Mission& mission,
                                            const ControllerContext& ctx);

struct ComparisonEntry {
  std::string mission;
  ControllerKind controller = ControllerKind::bangbang;
  std::optional<RunMetrics> metrics;     // empty when the run failed
  double cost = 0.0;                     // trace cost under the configured weights
  std::size_t forecast_fallbacks = 0;
  std::size_t limit_violations = 0;      // steps breaking the capacity or rate limit
  std::string error;
  std::shared_ptr<const SimulationTrace> trace;
};

struct ComparisonSpec {
  std::vector<Mission> missions;
  std::vector<ControllerKind> controllers{ControllerKind::smpc, ControllerKind::dp,
                                          ControllerKind::bangbang};
  // One matrix per mission (same order), or a single matrix shared by all.
  std::vector<std::shared_ptr<const TransitionMatrix>> matrices;
  bool oracle_forecast = false;
  bool keep_traces = false;
  unsigned threads = 0;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;  // mission-major, controllers in spec order

  const ComparisonEntry* find(const std::string& mission, ControllerKind k) const;
};

// Runs every (mission, controller) pair. A failed run is recorded with its
// error and does not stop the batch. Savings are relative to the bang-bang
// run of the same mission when one is present.
ComparisonReport run_comparison(const ComparisonSpec& spec, const AppConfig& cfg);

void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
void write_comparison_table(std::ostream& out, const ComparisonReport& report);

// Counts steps whose applied capacity breaks the bounds or the rate limit.
std::size_t count_limit_violations(const SimulationTrace& trace, const PlantLimits& limits,
                                   double initial_q_w);

}  // namespace evac
