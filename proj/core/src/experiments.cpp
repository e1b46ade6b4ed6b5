#include "evac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

#include "evac/errors.hpp"

namespace evac {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are written
// by index so the output order never depends on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

bool sorted_nonempty(const std::vector<double>& v) {
  return !v.empty() && std::is_sorted(v.begin(), v.end()) &&
         std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::speed: return "speed";
    case SweepVariable::solar: return "solar";
    case SweepVariable::ambient: return "ambient";
  }
  return "?";
}

SweepVariable sweep_variable_from_string(const std::string& s) {
  if (s == "speed") return SweepVariable::speed;
  if (s == "solar") return SweepVariable::solar;
  if (s == "ambient") return SweepVariable::ambient;
  throw ValidationError("unknown sweep variable '" + s + "' (speed|solar|ambient)");
}

void SweepSpec::validate() const {
  if (!sorted_nonempty(values)) throw ValidationError("sweep: value list must be non-empty and sorted");
  if (!sorted_nonempty(targets_c)) {
    throw ValidationError("sweep: target list must be non-empty and sorted");
  }
  if (!(duration_s >= 1.0)) throw ValidationError("sweep: duration must be >= 1 s");
  if (speed_kmh < 0.0 || solar_wm2 < 0.0) {
    throw ValidationError("sweep: held speed and solar must be >= 0");
  }
  if (variable != SweepVariable::ambient && (values.front() < 0.0)) {
    throw ValidationError("sweep: speed and solar values must be >= 0");
  }
}

LoadFollowingController::LoadFollowingController(const CabinPlant& plant,
                                                 std::shared_ptr<const DisturbanceTrace> mission)
    : plant_(&plant), mission_(std::move(mission)) {
  if (!mission_) throw ValidationError("load-following: missing mission");
}

double LoadFollowingController::command(const ControllerInput& in) {
  return LoadModel(plant_->vehicle(), in.env).total(in.temp_c);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const AppConfig& cfg, unsigned threads) {
  spec.validate();
  cfg.validate();
  const CabinPlant plant = cfg.make_plant();
  const auto steps = static_cast<std::size_t>(std::llround(spec.duration_s));

  std::vector<SweepRow> rows(spec.values.size() * spec.targets_c.size());
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const double value = spec.values[idx / spec.targets_c.size()];
    const double target = spec.targets_c[idx % spec.targets_c.size()];
    double speed = spec.speed_kmh, solar = spec.solar_wm2, ambient = spec.ambient_c;
    switch (spec.variable) {
      case SweepVariable::speed: speed = value; break;
      case SweepVariable::solar: solar = value; break;
      case SweepVariable::ambient: ambient = value; break;
    }
    const std::vector<double> sp(steps, speed), am(steps, ambient), so(steps, solar);
    const EnvironmentSample env{0.0, ambient, solar, kmh_to_ms(speed)};
    const double load = LoadModel(plant.vehicle(), env).total(target);
    const PlantLimits& lim = plant.limits();

    SweepRow row{value, target, load, 0.0, load > lim.q_cool_max_w};
    const double q0 = std::clamp(load, lim.q_cool_min_w, lim.q_cool_max_w);
    const Mission mission = make_mission("sweep", sp, am, so, target, q0, 1.0);
    LoadFollowingController ctl(plant, mission.disturbances);
    const SimulationTrace trace = run(mission, ctl, plant);
    row.energy_j = trace.rows.empty() ? 0.0 : trace.rows.back().energy_j;
    rows[idx] = row;
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  const char* unit = spec.variable == SweepVariable::speed   ? "_kmh"
                     : spec.variable == SweepVariable::solar ? "_wm2"
                                                             : "_c";
  out << to_string(spec.variable) << unit << ",target_c,load_w,energy_j,unreachable\n";
  out << std::setprecision(10);
  for (const SweepRow& r : rows) {
    out << r.value << ',' << r.target_c << ',' << r.load_w << ',' << r.energy_j << ','
        << (r.unreachable ? 1 : 0) << '\n';
  }
}

std::string to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::smpc: return "smpc";
    case ControllerKind::dp: return "dp";
    case ControllerKind::bangbang: return "bangbang";
  }
  return "?";
}

ControllerKind controller_kind_from_string(const std::string& s) {
  if (s == "smpc") return ControllerKind::smpc;
  if (s == "dp") return ControllerKind::dp;
  if (s == "bangbang") return ControllerKind::bangbang;
  throw ValidationError("unknown controller '" + s + "' (smpc|dp|bangbang)");
}

std::unique_ptr<Controller> make_controller(ControllerKind kind, const Mission& mission,
                                            const ControllerContext& ctx) {
  if (!ctx.config || !ctx.plant) throw ValidationError("controller context is incomplete");
  const AppConfig& cfg = *ctx.config;
  switch (kind) {
    case ControllerKind::bangbang:
      return std::make_unique<BangBangController>(cfg.bangbang, ctx.plant->limits());
    case ControllerKind::dp: {
      const Grid grid = cfg.grid.build(ctx.plant->limits());
      const CabinState x0{std::clamp(mission.initial_temp_c, grid.temp_axis.front(),
                                     grid.temp_axis.back()),
                          grid.q_axis[grid.nearest_q(mission.initial_q_w)]};
      SolveOptions opts;
      opts.threads = ctx.dp_threads;
      DpSolution sol = dp_benchmark(*ctx.plant, *mission.disturbances, cfg.cost, grid, x0, opts);
      return std::make_unique<ScheduleController>("dp", std::move(sol.commands));
    }
    case ControllerKind::smpc: {
      std::unique_ptr<SpeedForecaster> forecaster;
      if (ctx.oracle_forecast) {
        forecaster = std::make_unique<OracleForecaster>(mission.disturbances->speed_kmh);
      } else {
        if (!ctx.matrix) throw ValidationError("smpc requires a fitted transition matrix");
        forecaster = std::make_unique<MarkovForecaster>(ctx.matrix, cfg.smpc.mode, cfg.smpc.seed);
      }
      return std::make_unique<SmpcController>(*ctx.plant, cfg.cost, cfg.grid.build(ctx.plant->limits()),
                                              cfg.smpc.controller, mission.disturbances,
                                              std::move(forecaster));
    }
  }
  throw ValidationError("unknown controller kind");
}

std::size_t count_limit_violations(const SimulationTrace& trace, const PlantLimits& limits,
                                   double initial_q_w) {
  constexpr double kSlack = 1e-6;
  std::size_t bad = 0;
  double prev = initial_q_w;
  for (const TraceRow& r : trace.rows) {
    const bool bounds = r.q_cool_w >= limits.q_cool_min_w - kSlack && r.q_cool_w <= limits.q_cool_max_w + kSlack;
    const bool rate = std::abs(r.q_cool_w - prev) <= limits.rate_limit_w_s * trace.dt_s + kSlack;
    if (!bounds || !rate) ++bad;
    prev = r.q_cool_w;
  }
  return bad;
}

const ComparisonEntry* ComparisonReport::find(const std::string& mission, ControllerKind k) const {
  for (const ComparisonEntry& e : entries) {
    if (e.mission == mission && e.controller == k) return &e;
  }
  return nullptr;
}

ComparisonReport run_comparison(const ComparisonSpec& spec, const AppConfig& cfg) {
  cfg.validate();
  if (spec.controllers.empty()) throw ValidationError("compare: no controllers selected");
  const bool needs_matrix =
      !spec.oracle_forecast &&
      std::find(spec.controllers.begin(), spec.controllers.end(), ControllerKind::smpc) !=
          spec.controllers.end();
  if (needs_matrix && spec.matrices.size() != 1 && spec.matrices.size() != spec.missions.size()) {
    throw ValidationError("compare: smpc needs one matrix or one per mission");
  }
  const CabinPlant plant = cfg.make_plant();
  const MetricsOptions mopts{cfg.simulation.stats_skip_s};

  ComparisonReport report;
  report.entries.resize(spec.missions.size() * spec.controllers.size());
  std::vector<std::shared_ptr<const SimulationTrace>> traces(report.entries.size());

  parallel_for(report.entries.size(), spec.threads, [&](std::size_t idx) {
    const std::size_t mi = idx / spec.controllers.size();
    const Mission& mission = spec.missions[mi];
    ComparisonEntry& e = report.entries[idx];
    e.mission = mission.name;
    e.controller = spec.controllers[idx % spec.controllers.size()];
    try {
      ControllerContext ctx;
      ctx.config = &cfg;
      ctx.plant = &plant;
      ctx.oracle_forecast = spec.oracle_forecast;
      if (!spec.matrices.empty()) ctx.matrix = spec.matrices[spec.matrices.size() == 1 ? 0 : mi];
      auto ctl = make_controller(e.controller, mission, ctx);
      auto trace = std::make_shared<SimulationTrace>(run(mission, *ctl, plant));
      if (auto* smpc = dynamic_cast<SmpcController*>(ctl.get())) {
        e.forecast_fallbacks = smpc->fallback_events();
      }
      e.metrics = metrics(*trace, nullptr, mopts);
      e.cost = trace_cost(*trace, cfg.cost);
      e.limit_violations = count_limit_violations(*trace, plant.limits(), mission.initial_q_w);
      traces[idx] = std::move(trace);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  });

  for (std::size_t idx = 0; idx < report.entries.size(); ++idx) {
    ComparisonEntry& e = report.entries[idx];
    if (!e.metrics || e.controller == ControllerKind::bangbang) continue;
    const std::size_t base = idx - idx % spec.controllers.size();
    for (std::size_t c = 0; c < spec.controllers.size(); ++c) {
      const ComparisonEntry& b = report.entries[base + c];
      if (b.controller == ControllerKind::bangbang && b.metrics && b.metrics->total_energy_j > 0.0) {
        e.metrics->saving = 1.0 - e.metrics->total_energy_j / b.metrics->total_energy_j;
      }
    }
  }
  if (spec.keep_traces) {
    for (std::size_t i = 0; i < traces.size(); ++i) report.entries[i].trace = std::move(traces[i]);
  }
  return report;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "mission,controller,energy_j,saving,mean_temp_c,temp_std_c,cost,forecast_fallbacks,"
         "limit_violations,error\n";
  for (const ComparisonEntry& e : report.entries) {
    out << e.mission << ',' << to_string(e.controller) << ',';
    if (e.metrics) {
      out << fixed(e.metrics->total_energy_j, 3) << ','
          << (e.metrics->saving ? fixed(*e.metrics->saving, 6) : "") << ','
          << fixed(e.metrics->mean_temp_c, 6) << ',' << fixed(e.metrics->temp_std_c, 6) << ','
          << fixed(e.cost, 3) << ',' << e.forecast_fallbacks << ',' << e.limit_violations << ",";
    } else {
      out << ",,,,,,,";
    }
    std::string err = e.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << err << '\n';
  }
}

void write_comparison_table(std::ostream& out, const ComparisonReport& report) {
  const std::vector<std::string> head{"Mission", "Controller", "Energy x10^6 (J)", "Saving",
                                      "Mean Temperature (C)", "Standard Deviation (C)"};
  std::vector<std::vector<std::string>> cells;
  for (const ComparisonEntry& e : report.entries) {
    std::vector<std::string> row{e.mission, to_string(e.controller)};
    if (e.metrics) {
      row.push_back(fixed(e.metrics->total_energy_j / 1e6, 4));
      row.push_back(e.metrics->saving ? fixed(*e.metrics->saving * 100.0, 2) + "%" : "");
      row.push_back(fixed(e.metrics->mean_temp_c, 2));
      row.push_back(fixed(e.metrics->temp_std_c, 2));
    } else {
      row.insert(row.end(), {"failed", "", "", ""});
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& r : cells) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c > 0) out << "  ";
      // Labels left-aligned, numbers right-aligned.
      if (c < 2) {
        out << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      } else {
        out << std::right << std::setw(static_cast<int>(width[c])) << r[c];
      }
    }
    out << std::left << '\n';
  };
  line(head);
  std::size_t total = 2 * (head.size() - 1);
  for (std::size_t w : width) total += w;
  out << std::string(total, '-') << '\n';
  for (const auto& r : cells) line(r);
  for (const ComparisonEntry& e : report.entries) {
    if (!e.error.empty()) out << "error: " << e.mission << '/' << to_string(e.controller) << ": " << e.error << '\n';
  }
}

}  // namespace evac
