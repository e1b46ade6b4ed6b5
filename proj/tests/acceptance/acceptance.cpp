// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "../common/toy_dp.hpp"
#include "evac/config.hpp"
#include "evac/controllers.hpp"
#include "evac/experiments.hpp"
#include "evac/io.hpp"
#include "evac/simulation.hpp"
#include "evac/synthetic_cycles.hpp"

using namespace evac;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Violations seen by every closed-loop run below.
std::size_t g_violations = 0;
std::size_t g_steps = 0;

void audit(const SimulationTrace& trace, const PlantLimits& limits, double q0) {
  g_violations += count_limit_violations(trace, limits, q0);
  g_steps += trace.rows.size();
}

Outcome dp_vs_enumeration() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> nt(2, 5), nq(2, 4), horizon(1, 5);
  int matched = 0;
  double worst = 0.0;
  const int instances = 60;
  for (int k = 0; k < instances; ++k) {
    const auto inst = test::random_toy(rng, nt(rng), nq(rng), horizon(rng));
    const auto views = inst.views();
    const CabinState x0{inst.grid.temp_axis[inst.t0], inst.grid.q_axis[inst.q0]};
    const DpSolution sol = solve(inst.grid, inst.limits, views, x0);
    const auto oracle = test::enumerate(inst);
    const double rel = std::abs(sol.total_cost - oracle.cost) / std::max(1e-12, oracle.cost);
    worst = std::max(worst, rel);
    matched += rel <= 1e-9;
  }
  const double secs = seconds_since(t0);
  return {matched == instances && secs < 10.0,
          fmt("%d/%d toy instances match enumeration, worst rel. gap %.2e, %.2f s", matched, instances,
              worst, secs)};
}

Mission comparison_mission(const AppConfig& cfg, const std::string& name, const SpeedTrace& speeds) {
  return mission_from(make_cycle(name, speeds),
                      constant_environment(cfg.simulation.ambient_c, cfg.simulation.solar_wm2),
                      cfg.simulation);
}

Outcome smpc_degenerates_to_dp(const AppConfig& cfg) {
  const auto t0 = Clock::now();
  const CabinPlant plant = cfg.make_plant();
  const Grid grid = cfg.grid.build(cfg.plant);
  auto speeds = urban_reference_cycle();
  speeds.resize(200);
  const Mission m = comparison_mission(cfg, "urban200", speeds);
  const DpSolution dp = dp_benchmark(plant, *m.disturbances, cfg.cost, grid,
                                     {m.initial_temp_c, m.initial_q_w});
  SmpcController smpc(plant, cfg.cost, grid, SmpcConfig{m.size(), true}, m.disturbances,
                      std::make_unique<OracleForecaster>(m.disturbances->speed_kmh));
  const SimulationTrace trace = run(m, smpc, plant);
  audit(trace, cfg.plant, m.initial_q_w);
  const double cost = trace_cost(trace, cfg.cost);
  const double gap = std::abs(cost - dp.total_cost) / dp.total_cost;
  const double secs = seconds_since(t0);
  return {gap <= 0.01 && secs < 60.0,
          fmt("SMPC cost %.6e vs DP %.6e, gap %.4f%%, %.1f s", cost, dp.total_cost, 100.0 * gap, secs)};
}

Outcome integrator_oracle(const AppConfig& cfg) {
  const CabinPlant plant = cfg.make_plant();
  const double q = 3000.0;
  const std::size_t n = 101;
  std::vector<double> speed(n, 40.0), amb(n, 35.0), sol(n, 900.0);
  const Mission m = make_mission("const", speed, amb, sol, 40.0, q);
  struct Hold final : Controller {
    std::string_view name() const override { return "hold"; }
    double command(const ControllerInput&) override { return 3000.0; }
  } hold;
  const SimulationTrace trace = run(m, hold, plant);
  audit(trace, cfg.plant, q);
  const LoadModel loads(plant.vehicle(), m.disturbances->samples[0]);
  const double a = loads.total(0.0);
  const double b = loads.slope_w_k();
  const double inf = (a - q) / b;
  double worst = 0.0;
  for (const TraceRow& r : trace.rows) {
    const double exact = inf + (m.initial_temp_c - inf) * std::exp(-b * r.time_s / plant.heat_capacity());
    worst = std::max(worst, std::abs(r.temp_c - exact));
  }
  return {worst <= 1e-4, fmt("max |RK4 - exact| over 100 steps = %.2e degC", worst)};
}

Outcome markov_properties(const AppConfig& cfg) {
  auto corpus = urban_corpus(2, 1.0, 77);
  corpus[0].resize(600);
  corpus[1].resize(400);
  const auto m = TransitionMatrix::fit(corpus, cfg.quantizer);
  const auto& q = cfg.quantizer;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> oracle;
  for (const auto& t : corpus) {
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      auto bin = [&](double v) {
        return std::min(static_cast<std::size_t>(v / q.bin_width()), q.num_states() - 1);
      };
      ++oracle[{bin(t[k]), bin(t[k + 1])}];
    }
  }
  bool counts_ok = true;
  double worst_row = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const auto it = oracle.find({i, j});
      counts_ok &= m.count(i, j) == (it == oracle.end() ? 0 : it->second);
    }
    if (m.has_row(i)) {
      const auto r = m.row(i);
      worst_row = std::max(worst_row, std::abs(std::accumulate(r.begin(), r.end(), 0.0) - 1.0));
    }
  }
  bool deterministic = true;
  for (double v : {0.0, 17.3, 42.0, 70.5}) {
    const auto ref = predict(m, v, 10);
    for (int k = 0; k < 100; ++k) deterministic &= predict(m, v, 10).states == ref.states;
  }
  return {counts_ok && worst_row <= 1e-9 && deterministic,
          fmt("1000 samples: counts %s, max |row sum - 1| = %.1e, argmax repeatable %s",
              counts_ok ? "exact" : "MISMATCH", worst_row, deterministic ? "yes" : "NO")};
}

std::vector<double> sweep_energy(const AppConfig& cfg, SweepVariable var, std::vector<double> values) {
  SweepSpec spec;
  spec.variable = var;
  spec.values = std::move(values);
  spec.duration_s = cfg.sweep.duration_s;
  std::vector<double> e;
  for (const SweepRow& r : run_sweep(spec, cfg)) e.push_back(r.energy_j);
  return e;
}

Outcome solar_linearity(const AppConfig& cfg) {
  std::vector<double> xs;
  for (double i = 700.0; i <= 1300.0; i += 50.0) xs.push_back(i);
  const auto ys = sweep_energy(cfg, SweepVariable::solar, xs);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
  return {r2 >= 0.98, fmt("R^2 = %.5f over 700-1300 W/m2, slope %.1f J per W/m2", r2, sxy / sxx)};
}

Outcome speed_shape(const AppConfig& cfg) {
  const auto e = sweep_energy(cfg, SweepVariable::speed, {0.0, 5.0, 40.0, 100.0});
  const double drop = e[0] / e[1] - 1.0;
  const double flat = std::abs(e[3] - e[2]) / e[2];
  return {drop >= 0.10 && drop <= 0.35 && flat <= 0.05,
          fmt("E(0)/E(5) - 1 = %.1f%%, |E(100) - E(40)|/E(40) = %.2f%%", 100.0 * drop, 100.0 * flat)};
}

Outcome ambient_shape(const AppConfig& cfg) {
  std::vector<double> xs;
  for (double t = 25.0; t <= 40.0; t += 1.0) xs.push_back(t);
  const auto e = sweep_energy(cfg, SweepVariable::ambient, xs);
  bool increasing = true;
  double min_second = 1e300;
  for (std::size_t k = 1; k < e.size(); ++k) {
    increasing &= e[k] > e[k - 1];
    if (k >= 2) min_second = std::min(min_second, (e[k] - e[k - 1]) - (e[k - 1] - e[k - 2]));
  }
  const bool convex = min_second > 0.0;
  return {increasing && convex,
          fmt("%zu points 25-40 degC: increasing %s, smallest second difference %.0f J "
              "(E25 %.3e J, E40 %.3e J)",
              e.size(), increasing ? "yes" : "NO", min_second, e.front(), e.back())};
}

struct ComparisonResults {
  ComparisonReport report;
  std::vector<std::string> missions;
  double seconds = 0.0;
};

ComparisonResults run_reference_comparison(const AppConfig& cfg) {
  const auto t0 = Clock::now();
  ComparisonSpec spec;
  ComparisonResults out;
  for (double scale : {0.68, 1.45}) {
    const std::string name = fmt("urbanx%.2f", scale);
    spec.missions.push_back(comparison_mission(cfg, name, scale_cycle(urban_reference_cycle(), scale)));
    spec.matrices.push_back(std::make_shared<TransitionMatrix>(
        TransitionMatrix::fit(urban_corpus(20, scale), cfg.quantizer)));
    out.missions.push_back(name);
  }
  spec.keep_traces = true;
  out.report = run_comparison(spec, cfg);
  out.seconds = seconds_since(t0);
  for (const auto& e : out.report.entries) {
    if (e.trace) audit(*e.trace, cfg.plant, cfg.simulation.initial_q_w);
  }
  return out;
}

Outcome controller_ordering(const ComparisonResults& c) {
  bool ok = c.seconds < 300.0;
  std::string detail;
  for (const auto& name : c.missions) {
    const auto* s = c.report.find(name, ControllerKind::smpc);
    const auto* d = c.report.find(name, ControllerKind::dp);
    const auto* b = c.report.find(name, ControllerKind::bangbang);
    if (!s || !d || !b || !s->metrics || !d->metrics || !b->metrics) {
      return {false, name + ": a run failed"};
    }
    const double es = s->metrics->total_energy_j;
    const double ed = d->metrics->total_energy_j;
    const double eb = b->metrics->total_energy_j;
    const double saving = s->metrics->saving.value_or(0.0);
    const double std_ratio = s->metrics->temp_std_c / b->metrics->temp_std_c;
    const double vs_dp = es / ed - 1.0;
    ok &= ed <= es && es <= eb && saving >= 0.08 && std_ratio <= 0.65 && vs_dp <= 0.05;
    detail += fmt("%s: E dp/smpc/bb %.4f/%.4f/%.4f MJ, saving %.2f%%, std ratio %.3f, smpc-dp %+.4f%%; ",
                  name.c_str(), ed / 1e6, es / 1e6, eb / 1e6, 100.0 * saving, std_ratio, 100.0 * vs_dp);
  }
  detail += fmt("%.1f s", c.seconds);
  return {ok, detail};
}

Outcome bang_bang_band(const AppConfig& cfg, const ComparisonResults& c) {
  const double lo = cfg.bangbang.t_low_c - 0.5;
  const double hi = cfg.bangbang.t_high_c + 0.5;
  bool ok = true;
  std::string detail;
  for (const auto& name : c.missions) {
    const auto* b = c.report.find(name, ControllerKind::bangbang);
    if (!b || !b->trace) return {false, name + ": bang-bang run failed"};
    const auto& rows = b->trace->rows;
    std::size_t k = 0;
    while (k < rows.size() && rows[k].temp_c > cfg.bangbang.t_low_c) ++k;
    if (k == rows.size()) return {false, name + ": pull-down never reached t_low"};
    double mn = rows[k].temp_c, mx = rows[k].temp_c;
    for (; k < rows.size(); ++k) {
      mn = std::min(mn, rows[k].temp_c);
      mx = std::max(mx, rows[k].temp_c);
    }
    ok &= mn >= lo && mx <= hi;
    detail += fmt("%s after pull-down [%.2f, %.2f]; ", name.c_str(), mn, mx);
  }
  detail += fmt("band [%.1f, %.1f]", lo, hi);
  return {ok, detail};
}

Outcome constraint_compliance() {
  return {g_violations == 0 && g_steps > 0,
          fmt("%zu violations in %zu closed-loop steps", g_violations, g_steps)};
}

}  // namespace

int main() {
  const AppConfig cfg = default_config();
  int failures = 0;
  auto report = [&](int n, const char* title, const Outcome& o) {
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "DP optimality oracle", guarded(dp_vs_enumeration));
  report(2, "SMPC to DP degeneracy", guarded([&] { return smpc_degenerates_to_dp(cfg); }));
  report(3, "integrator oracle", guarded([&] { return integrator_oracle(cfg); }));
  report(4, "Markov properties", guarded([&] { return markov_properties(cfg); }));
  report(5, "solar sensitivity", guarded([&] { return solar_linearity(cfg); }));
  report(6, "speed sensitivity", guarded([&] { return speed_shape(cfg); }));
  report(7, "ambient sensitivity", guarded([&] { return ambient_shape(cfg); }));
  ComparisonResults cmp;
  Outcome cmp_error{false, ""};
  try {
    cmp = run_reference_comparison(cfg);
  } catch (const std::exception& e) {
    cmp_error.detail = std::string("exception: ") + e.what();
  }
  const bool have_cmp = cmp_error.detail.empty();
  report(8, "controller ordering", have_cmp ? guarded([&] { return controller_ordering(cmp); }) : cmp_error);
  report(9, "bang-bang band", have_cmp ? guarded([&] { return bang_bang_band(cfg, cmp); }) : cmp_error);
  report(10, "constraint compliance", constraint_compliance());
  return failures;
}
