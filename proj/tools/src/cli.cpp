#include "evac_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evac/config.hpp"
#include "evac/errors.hpp"
#include "evac/experiments.hpp"
#include "evac/io.hpp"
#include "evac/simulation.hpp"
#include "evac/synthetic_cycles.hpp"
#include "evac/velocity_markov.hpp"

namespace evac::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config_path;
  std::string out_path;
};

struct MissionArgs {
  std::vector<std::string> cycles;
  std::vector<double> scales;
  std::string env_path;
};

struct PredictorArgs {
  std::string matrix_path;
  std::vector<std::string> train;
  std::size_t synthetic = 20;
};

AppConfig load_app_config(const Common& c) {
  AppConfig cfg = c.config_path.empty() ? default_config() : load_config(c.config_path);
  cfg.validate();
  return cfg;
}

// Writes to --out when given, otherwise to the command's stdout.
template <class F>
void emit(const Common& c, std::ostream& out, F&& write) {
  if (c.out_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(c.out_path);
  if (!file) throw ValidationError("cannot write " + c.out_path);
  write(file);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(' ');
    const std::string_view f(item.data() + b, e - b + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size()) {
      throw ValidationError(what + ": malformed number '" + std::string(f) + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string scale_suffix(double s) {
  if (s == 1.0) return "";
  std::ostringstream os;
  os << "x" << s;
  return os.str();
}

std::vector<CycleFile> load_cycles(const std::vector<std::string>& paths) {
  std::vector<CycleFile> out;
  if (paths.empty()) {
    out.push_back(make_cycle("urban", urban_reference_cycle()));
    return out;
  }
  for (const std::string& p : paths) {
    CycleFile c = load_cycle(p);
    c.name = fs::path(p).stem().string();
    out.push_back(std::move(c));
  }
  return out;
}

struct MissionSet {
  std::vector<Mission> missions;
  std::vector<double> scales;  // per mission
};

MissionSet build_missions(const MissionArgs& a, const AppConfig& cfg) {
  const EnvironmentFile env = a.env_path.empty()
                                  ? constant_environment(cfg.simulation.ambient_c,
                                                         cfg.simulation.solar_wm2)
                                  : load_environment(a.env_path);
  const std::vector<double> scales = a.scales.empty() ? std::vector<double>{1.0} : a.scales;
  MissionSet set;
  for (const CycleFile& base : load_cycles(a.cycles)) {
    for (double s : scales) {
      CycleFile c = make_cycle(base.name + scale_suffix(s), scale_cycle(base.speed_kmh, s));
      set.missions.push_back(mission_from(c, env, cfg.simulation, cfg.grid.dt_s));
      set.scales.push_back(s);
    }
  }
  return set;
}

std::vector<SpeedTrace> load_corpus(const std::vector<std::string>& paths) {
  std::vector<SpeedTrace> out;
  for (const std::string& p : paths) out.push_back(load_cycle(p).speed_kmh);
  return out;
}

// Matrix per mission: an explicit file, a fit on --train cycles, or a fit on
// a synthetic urban corpus scaled like the mission.
std::vector<std::shared_ptr<const TransitionMatrix>> build_matrices(const PredictorArgs& p,
                                                                    const MissionSet& set,
                                                                    const AppConfig& cfg,
                                                                    std::ostream& log) {
  if (!p.matrix_path.empty()) {
    auto m = std::make_shared<const TransitionMatrix>(load_matrix(p.matrix_path));
    if (!(m->quantizer() == cfg.quantizer)) {
      log << "note: matrix bins differ from the config; using the matrix's own bins\n";
    }
    return {m};
  }
  if (!p.train.empty()) {
    const auto corpus = load_corpus(p.train);
    return {std::make_shared<const TransitionMatrix>(TransitionMatrix::fit(corpus, cfg.quantizer))};
  }
  std::vector<std::shared_ptr<const TransitionMatrix>> out;
  for (double s : set.scales) {
    const auto corpus = urban_corpus(p.synthetic, s);
    out.push_back(std::make_shared<const TransitionMatrix>(TransitionMatrix::fit(corpus, cfg.quantizer)));
  }
  return out;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Configuration JSON (defaults built in)")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", c.out_path, "Output file (default: stdout)");
}

void add_missions(CLI::App* sub, MissionArgs& m) {
  sub->add_option("--cycle", m.cycles, "Cycle CSV (repeatable; default: built-in urban cycle)")
      ->check(CLI::ExistingFile);
  sub->add_option("--scale", m.scales, "Speed scale factor (repeatable)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--env", m.env_path, "Environment CSV (default: constant from config)")
      ->check(CLI::ExistingFile);
}

void add_predictor(CLI::App* sub, PredictorArgs& p) {
  sub->add_option("--matrix", p.matrix_path, "Transition matrix JSON")->check(CLI::ExistingFile);
  sub->add_option("--train", p.train, "Training cycle CSVs (repeatable)")->check(CLI::ExistingFile);
  sub->add_option("--synthetic", p.synthetic, "Synthetic training cycles when no matrix is given")
      ->check(CLI::PositiveNumber);
}

std::string fmt(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cabin air-conditioning energy management: Markov speed prediction, SMPC, DP "
               "benchmark and rule-based control."};
  app.name("evac");
  app.require_subcommand(1);

  Common common;
  MissionArgs missions;
  PredictorArgs predictor;
  std::string controller = "smpc";
  std::vector<std::string> controllers;
  std::optional<std::size_t> horizon;
  std::optional<std::uint64_t> seed;
  std::string mode;
  bool oracle = false;

  // fit-markov
  auto* fit = app.add_subcommand("fit-markov", "Fit a speed transition matrix from cycles");
  add_common(fit, common);
  std::vector<std::string> test_files;
  std::size_t split = 0;
  double fit_scale = 1.0;
  fit->add_option("--train", predictor.train, "Training cycle CSVs")->check(CLI::ExistingFile);
  fit->add_option("--test", test_files, "Held-out cycle CSVs for evaluation")->check(CLI::ExistingFile);
  fit->add_option("--split", split, "Hold out the last N --train files as the test set");
  fit->add_option("--synthetic", predictor.synthetic, "Synthetic cycles when no --train is given");
  fit->add_option("--scale", fit_scale, "Scale for synthetic cycles")->check(CLI::PositiveNumber);
  fit->add_option("--horizon", horizon, "Horizon for the held-out evaluation");

  // predict
  auto* pred = app.add_subcommand("predict", "Chained speed predictions along a cycle");
  add_common(pred, common);
  std::string pred_cycle;
  pred->add_option("--matrix", predictor.matrix_path, "Transition matrix JSON")
      ->required()
      ->check(CLI::ExistingFile);
  pred->add_option("--cycle", pred_cycle, "Cycle CSV")->required()->check(CLI::ExistingFile);
  pred->add_option("--horizon", horizon, "Prediction horizon in steps");
  pred->add_option("--seed", seed, "Seed for sample mode");
  pred->add_option("--mode", mode, "argmax | expectation | sample");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one controller over one mission");
  add_common(sim, common);
  add_missions(sim, missions);
  add_predictor(sim, predictor);
  sim->add_option("--controller", controller, "smpc | dp | bangbang")
      ->check(CLI::IsMember({"smpc", "dp", "bangbang"}));
  sim->add_option("--horizon", horizon, "SMPC horizon in steps");
  sim->add_option("--seed", seed, "Seed for sample mode");
  sim->add_option("--mode", mode, "argmax | expectation | sample");
  sim->add_flag("--oracle", oracle, "SMPC sees the true future speeds");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Constant-condition energy sensitivity sweep");
  add_common(sweep, common);
  std::string variable = "speed", values_text, targets_text = "23";
  SweepSpec spec;
  std::optional<double> duration;
  sweep->add_option("--variable", variable, "speed | solar | ambient")
      ->check(CLI::IsMember({"speed", "solar", "ambient"}));
  sweep->add_option("--values", values_text, "Comma-separated swept values, ascending");
  sweep->add_option("--targets", targets_text, "Comma-separated cabin targets in degC");
  sweep->add_option("--speed", spec.speed_kmh, "Held speed in km/h");
  sweep->add_option("--solar", spec.solar_wm2, "Held solar flux in W/m2");
  sweep->add_option("--ambient", spec.ambient_c, "Held ambient temperature in degC");
  sweep->add_option("--duration", duration, "Mission length in s");

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare controllers over a mission set");
  add_common(cmp, common);
  add_missions(cmp, missions);
  add_predictor(cmp, predictor);
  std::string csv_path;
  cmp->add_option("--controller", controllers, "Controllers to run (repeatable)")
      ->check(CLI::IsMember({"smpc", "dp", "bangbang"}));
  cmp->add_option("--horizon", horizon, "SMPC horizon in steps");
  cmp->add_option("--seed", seed, "Seed for sample mode");
  cmp->add_option("--mode", mode, "argmax | expectation | sample");
  cmp->add_option("--csv", csv_path, "Also write the per-run CSV here");
  cmp->add_flag("--oracle", oracle, "SMPC sees the true future speeds");

  // density
  auto* dens = app.add_subcommand("density", "Speed-acceleration histogram of a corpus");
  add_common(dens, common);
  double speed_bin = 2.0, accel_bin = 0.5;
  dens->add_option("--train", predictor.train, "Cycle CSVs")->check(CLI::ExistingFile);
  dens->add_option("--synthetic", predictor.synthetic, "Synthetic cycles when no --train is given");
  dens->add_option("--scale", fit_scale, "Scale for synthetic cycles")->check(CLI::PositiveNumber);
  dens->add_option("--speed-bin", speed_bin, "Speed bin width in km/h")->check(CLI::PositiveNumber);
  dens->add_option("--accel-bin", accel_bin, "Acceleration bin width in km/h/s")
      ->check(CLI::PositiveNumber);

  // synth-cycle
  auto* syn = app.add_subcommand("synth-cycle", "Write a synthetic driving cycle");
  add_common(syn, common);
  std::string profile = "urban";
  std::size_t length = 1370;
  std::optional<std::uint64_t> syn_seed;
  syn->add_option("--profile", profile, "urban | highway")->check(CLI::IsMember({"urban", "highway"}));
  syn->add_option("--length", length, "Length in s")->check(CLI::PositiveNumber);
  syn->add_option("--seed", syn_seed, "Generator seed (default: the reference urban cycle)");
  syn->add_option("--scale", fit_scale, "Speed scale factor")->check(CLI::PositiveNumber);

  auto* dump = app.add_subcommand("dump-config", "Write the effective configuration as JSON");
  add_common(dump, common);

  // CLI11 consumes a vector of arguments in reverse, without the program name.
  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    AppConfig cfg = load_app_config(common);
    if (horizon) cfg.smpc.controller.horizon = *horizon;
    if (seed) cfg.smpc.seed = *seed;
    if (!mode.empty()) cfg.smpc.mode = prediction_mode_from_string(mode);
    cfg.validate();

    if (*fit) {
      std::vector<std::string> train = predictor.train;
      std::vector<std::string> test = test_files;
      if (split > 0) {
        if (split >= train.size()) throw ValidationError("fit-markov: --split leaves no training cycles");
        test.insert(test.begin(), train.end() - static_cast<std::ptrdiff_t>(split), train.end());
        train.resize(train.size() - split);
      }
      const std::vector<SpeedTrace> corpus =
          train.empty() ? urban_corpus(predictor.synthetic, fit_scale) : load_corpus(train);
      const TransitionMatrix m = TransitionMatrix::fit(corpus, cfg.quantizer);
      std::size_t empty_rows = 0;
      std::uint64_t transitions = 0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        empty_rows += m.has_row(i) ? 0 : 1;
        transitions += m.row_total(i);
      }
      if (common.out_path.empty()) {
        out << matrix_to_json(m).dump() << '\n';
      } else {
        save_matrix(common.out_path, m);
      }
      err << "fitted " << m.size() << " states from " << corpus.size() << " cycles, "
          << transitions << " transitions, " << empty_rows << " empty rows\n";
      if (!test.empty()) {
        const std::size_t h = cfg.smpc.controller.horizon;
        double sq = 0.0;
        std::size_t n = 0;
        for (const SpeedTrace& t : load_corpus(test)) {
          for (std::size_t k = 0; k + h < t.size(); ++k) {
            const SpeedPrediction p = predict(m, t[k], h);
            for (std::size_t s = 0; s < h; ++s) {
              const double d = p.speeds_kmh[s] - t[k + s + 1];
              sq += d * d;
              ++n;
            }
          }
        }
        err << "held-out " << test.size() << " cycles, " << h << "-step rmse "
            << fmt(n ? std::sqrt(sq / static_cast<double>(n)) : 0.0, 3) << " km/h\n";
      }
      return 0;
    }

    if (*pred) {
      const TransitionMatrix m = load_matrix(predictor.matrix_path);
      const CycleFile cycle = load_cycle(pred_cycle);
      const std::size_t h = cfg.smpc.controller.horizon;
      emit(common, out, [&](std::ostream& os) {
        os << "time_s,speed_kmh";
        for (std::size_t s = 1; s <= h; ++s) os << ",pred_" << s;
        os << ",fallback\n" << std::setprecision(10);
        for (std::size_t k = 0; k < cycle.size(); ++k) {
          const SpeedPrediction p = predict(m, cycle.speed_kmh[k], h, cfg.smpc.mode, cfg.smpc.seed + k);
          os << cycle.time_s[k] << ',' << cycle.speed_kmh[k];
          for (double v : p.speeds_kmh) os << ',' << v;
          os << ',' << (p.used_fallback() ? 1 : 0) << '\n';
        }
      });
      return 0;
    }

    if (*sim) {
      const MissionSet set = build_missions(missions, cfg);
      const Mission& mission = set.missions.front();
      const CabinPlant plant = cfg.make_plant();
      ControllerContext ctx;
      ctx.config = &cfg;
      ctx.plant = &plant;
      ctx.oracle_forecast = oracle;
      const ControllerKind kind = controller_kind_from_string(controller);
      if (kind == ControllerKind::smpc && !oracle) {
        MissionSet first{{mission}, {set.scales.front()}};
        ctx.matrix = build_matrices(predictor, first, cfg, err).front();
      }
      auto ctl = make_controller(kind, mission, ctx);
      const SimulationTrace trace = run(mission, *ctl, plant);
      const RunMetrics m = metrics(trace, nullptr, MetricsOptions{cfg.simulation.stats_skip_s});
      emit(common, out, [&](std::ostream& os) { write_trace_csv(os, trace); });
      std::ostream& summary = common.out_path.empty() ? err : out;
      summary << mission.name << " / " << controller << ": energy " << fmt(m.total_energy_j / 1e6, 4)
              << "e6 J, mean " << fmt(m.mean_temp_c, 2) << " C, std " << fmt(m.temp_std_c, 2)
              << " C\n";
      return 0;
    }

    if (*sweep) {
      spec.variable = sweep_variable_from_string(variable);
      spec.values = parse_list(values_text, "--values");
      spec.targets_c = parse_list(targets_text, "--targets");
      spec.duration_s = duration.value_or(cfg.sweep.duration_s);
      spec.validate();
      const std::vector<SweepRow> rows = run_sweep(spec, cfg);
      emit(common, out, [&](std::ostream& os) { write_sweep_csv(os, spec, rows); });
      return 0;
    }

    if (*cmp) {
      ComparisonSpec cs;
      const MissionSet set = build_missions(missions, cfg);
      cs.missions = set.missions;
      if (!controllers.empty()) {
        cs.controllers.clear();
        for (const std::string& c : controllers) cs.controllers.push_back(controller_kind_from_string(c));
      }
      cs.oracle_forecast = oracle;
      if (!oracle && std::find(cs.controllers.begin(), cs.controllers.end(), ControllerKind::smpc) !=
                         cs.controllers.end()) {
        cs.matrices = build_matrices(predictor, set, cfg, err);
      }
      const ComparisonReport report = run_comparison(cs, cfg);
      emit(common, out, [&](std::ostream& os) { write_comparison_table(os, report); });
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw ValidationError("cannot write " + csv_path);
        write_comparison_csv(csv, report);
      }
      const bool failed = std::any_of(report.entries.begin(), report.entries.end(),
                                      [](const ComparisonEntry& e) { return !e.metrics; });
      return failed ? 1 : 0;
    }

    if (*dens) {
      const std::vector<SpeedTrace> corpus = predictor.train.empty()
                                                 ? urban_corpus(predictor.synthetic, fit_scale)
                                                 : load_corpus(predictor.train);
      const SpeedAccelHistogram h = vel_accel_density(corpus, speed_bin, accel_bin);
      emit(common, out, [&](std::ostream& os) {
        os << "speed_kmh,accel_kmh_s,density\n" << std::setprecision(10);
        for (std::size_t i = 0; i < h.speed_bins; ++i) {
          for (std::size_t j = 0; j < h.accel_bins; ++j) {
            os << (static_cast<double>(i) + 0.5) * h.speed_bin_kmh << ',' << h.accel_center(j) << ','
               << h.density[i * h.accel_bins + j] << '\n';
          }
        }
      });
      return 0;
    }

    if (*syn) {
      SpeedTrace v = syn_seed ? generate_cycle(profile == "urban" ? urban_profile() : highway_profile(),
                                               length, *syn_seed)
                   : profile == "urban" && length == 1370
                       ? urban_reference_cycle()
                       : generate_cycle(profile == "urban" ? urban_profile() : highway_profile(),
                                        length, 0);
      if (fit_scale != 1.0) v = scale_cycle(v, fit_scale);
      const CycleFile c = make_cycle(profile, std::move(v));
      emit(common, out, [&](std::ostream& os) { write_cycle(os, c); });
      return 0;
    }

    if (*dump) {
      emit(common, out, [&](std::ostream& os) { os << config_to_json(cfg).dump(2) << '\n'; });
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace evac::cli
