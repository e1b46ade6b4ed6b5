#pragma once

// File formats: driving cycles and environment traces (CSV), trained
// transition matrices (JSON). Loaders validate everything before returning
// and report the 1-based file line of the first bad row.

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evac/config.hpp"
#include "evac/simulation.hpp"
#include "evac/velocity_markov.hpp"

namespace evac {

// Header `time_s,speed_kmh`; time advances by exactly 1 s per row.
struct CycleFile {
  std::string name;
  std::vector<double> time_s;
  std::vector<double> speed_kmh;

  std::size_t size() const { return speed_kmh.size(); }
};

CycleFile parse_cycle(std::istream& in, const std::string& name);
CycleFile load_cycle(const std::filesystem::path& path);
void write_cycle(std::ostream& out, const CycleFile& cycle);
void save_cycle(const std::filesystem::path& path, const CycleFile& cycle);
CycleFile make_cycle(std::string name, std::vector<double> speed_kmh);

struct EnvironmentRow {
  double time_s = 0.0;
  double ambient_c = 0.0;
  double solar_wm2 = 0.0;
};

// Header `time_s,ambient_c,solar_wm2`. A single row means constant
// conditions; otherwise values are interpolated linearly in time and held
// beyond the first and last rows.
struct EnvironmentFile {
  std::string name;
  std::vector<EnvironmentRow> rows;

  bool constant() const { return rows.size() == 1; }
  EnvironmentRow at(double time_s) const;
};

EnvironmentFile parse_environment(std::istream& in, const std::string& name);
EnvironmentFile load_environment(const std::filesystem::path& path);
void write_environment(std::ostream& out, const EnvironmentFile& env);
EnvironmentFile constant_environment(double ambient_c, double solar_wm2);

Mission mission_from(const CycleFile& cycle, const EnvironmentFile& env,
                     const SimulationSettings& sim, double dt_s = 1.0);

// {"format": "evac-markov-v1", "bin_width_kmh", "v_max_kmh", "num_states",
//  "counts": [row-major p*p], "probabilities": [row-major p*p]}
nlohmann::json matrix_to_json(const TransitionMatrix& m);
TransitionMatrix matrix_from_json(const nlohmann::json& doc);
void save_matrix(const std::filesystem::path& path, const TransitionMatrix& m);
TransitionMatrix load_matrix(const std::filesystem::path& path);

}  // namespace evac
