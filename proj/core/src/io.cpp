#include "evac/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

#include "evac/errors.hpp"

namespace evac {

namespace {

constexpr std::string_view kMatrixFormat = "evac-markov-v1";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t row, const std::string& what) {
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ValidationError("malformed " + what + " '" + std::string(field) + "'", row);
  }
  return v;
}

// Reads data rows after the expected header; returns (line number, fields).
std::vector<std::pair<std::size_t, std::vector<double>>> read_table(
    std::istream& in, const std::vector<std::string>& header, const std::string& source) {
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split(t);
    if (!header_seen) {
      bool match = fields.size() == header.size();
      for (std::size_t i = 0; match && i < header.size(); ++i) match = fields[i] == header[i];
      if (!match) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw ValidationError(source + ": expected header '" + expected + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ValidationError(source + ": expected " + std::to_string(header.size()) + " fields",
                            line_no);
    }
    std::vector<double> values;
    values.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      values.push_back(parse_number(fields[i], line_no, header[i]));
    }
    rows.emplace_back(line_no, std::move(values));
  }
  if (!header_seen) throw ValidationError(source + ": missing header");
  return rows;
}

}  // namespace

CycleFile parse_cycle(std::istream& in, const std::string& name) {
  const auto rows = read_table(in, {"time_s", "speed_kmh"}, name);
  CycleFile c;
  c.name = name;
  c.time_s.reserve(rows.size());
  c.speed_kmh.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [line, v] = rows[i];
    if (v[1] < 0.0) throw ValidationError(name + ": negative speed", line);
    if (i > 0) {
      const double step = v[0] - c.time_s.back();
      if (step <= 0.0) throw ValidationError(name + ": time must be strictly increasing", line);
      if (std::abs(step - 1.0) > 1e-9) {
        throw ValidationError(name + ": samples must be spaced 1 s apart", line);
      }
    }
    c.time_s.push_back(v[0]);
    c.speed_kmh.push_back(v[1]);
  }
  if (c.speed_kmh.empty()) throw ValidationError(name + ": no data rows");
  return c;
}

CycleFile load_cycle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open cycle file " + path.string());
  return parse_cycle(in, path.string());
}

void write_cycle(std::ostream& out, const CycleFile& cycle) {
  out << "time_s,speed_kmh\n" << std::setprecision(10);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    out << cycle.time_s[i] << ',' << cycle.speed_kmh[i] << '\n';
  }
}

void save_cycle(const std::filesystem::path& path, const CycleFile& cycle) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write cycle file " + path.string());
  write_cycle(out, cycle);
}

CycleFile make_cycle(std::string name, std::vector<double> speed_kmh) {
  CycleFile c;
  c.name = std::move(name);
  c.time_s.resize(speed_kmh.size());
  for (std::size_t i = 0; i < speed_kmh.size(); ++i) c.time_s[i] = static_cast<double>(i);
  c.speed_kmh = std::move(speed_kmh);
  return c;
}

EnvironmentRow EnvironmentFile::at(double time_s) const {
  if (rows.empty()) throw ValidationError("environment '" + name + "' has no rows");
  if (rows.size() == 1 || time_s <= rows.front().time_s) return {time_s, rows.front().ambient_c, rows.front().solar_wm2};
  if (time_s >= rows.back().time_s) return {time_s, rows.back().ambient_c, rows.back().solar_wm2};
  const auto it = std::upper_bound(rows.begin(), rows.end(), time_s,
                                   [](double t, const EnvironmentRow& r) { return t < r.time_s; });
  const EnvironmentRow& hi = *it;
  const EnvironmentRow& lo = *(it - 1);
  const double span = hi.time_s - lo.time_s;
  const double w = span > 0.0 ? (time_s - lo.time_s) / span : 1.0;
  return {time_s, lo.ambient_c + w * (hi.ambient_c - lo.ambient_c),
          lo.solar_wm2 + w * (hi.solar_wm2 - lo.solar_wm2)};
}

EnvironmentFile parse_environment(std::istream& in, const std::string& name) {
  const auto rows = read_table(in, {"time_s", "ambient_c", "solar_wm2"}, name);
  EnvironmentFile env;
  env.name = name;
  for (const auto& [line, v] : rows) {
    if (!env.rows.empty() && v[0] < env.rows.back().time_s) {
      throw ValidationError(name + ": time must be nondecreasing", line);
    }
    if (v[2] < 0.0) throw ValidationError(name + ": negative solar flux", line);
    if (v[1] < -50.0 || v[1] > 60.0) {
      throw ValidationError(name + ": ambient temperature outside [-50, 60] degC", line);
    }
    env.rows.push_back({v[0], v[1], v[2]});
  }
  if (env.rows.empty()) throw ValidationError(name + ": no data rows");
  return env;
}

EnvironmentFile load_environment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open environment file " + path.string());
  return parse_environment(in, path.string());
}

void write_environment(std::ostream& out, const EnvironmentFile& env) {
  out << "time_s,ambient_c,solar_wm2\n" << std::setprecision(10);
  for (const EnvironmentRow& r : env.rows) {
    out << r.time_s << ',' << r.ambient_c << ',' << r.solar_wm2 << '\n';
  }
}

EnvironmentFile constant_environment(double ambient_c, double solar_wm2) {
  return EnvironmentFile{"constant", {{0.0, ambient_c, solar_wm2}}};
}

Mission mission_from(const CycleFile& cycle, const EnvironmentFile& env,
                     const SimulationSettings& sim, double dt_s) {
  std::vector<double> ambient(cycle.size());
  std::vector<double> solar(cycle.size());
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const EnvironmentRow r = env.at(cycle.time_s[k] - cycle.time_s.front());
    ambient[k] = r.ambient_c;
    solar[k] = r.solar_wm2;
  }
  return make_mission(cycle.name, cycle.speed_kmh, ambient, solar, sim.initial_temp_c,
                      sim.initial_q_w, dt_s);
}

nlohmann::json matrix_to_json(const TransitionMatrix& m) {
  const VelocityQuantizer& q = m.quantizer();
  return nlohmann::json{
      {"format", kMatrixFormat},
      {"bin_width_kmh", q.bin_width()},
      {"v_max_kmh", q.v_max()},
      {"num_states", q.num_states()},
      {"counts", std::vector<std::uint64_t>(m.counts().begin(), m.counts().end())},
      {"probabilities", std::vector<double>(m.probabilities().begin(), m.probabilities().end())},
  };
}

TransitionMatrix matrix_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format", std::string()) != kMatrixFormat) {
      throw ValidationError("matrix: unsupported format tag");
    }
    const VelocityQuantizer q(doc.at("bin_width_kmh").get<double>(),
                              doc.at("v_max_kmh").get<double>());
    if (doc.at("num_states").get<std::size_t>() != q.num_states()) {
      throw ValidationError("matrix: num_states does not match the bin layout");
    }
    return TransitionMatrix::from_counts(q, doc.at("counts").get<std::vector<std::uint64_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("matrix: ") + e.what());
  }
}

void save_matrix(const std::filesystem::path& path, const TransitionMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write matrix file " + path.string());
  out << matrix_to_json(m).dump() << '\n';
}

TransitionMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("matrix " + path.string() + ": " + e.what());
  }
  return matrix_from_json(doc);
}

}  // namespace evac
