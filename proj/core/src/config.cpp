#include "evac/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "evac/errors.hpp"

namespace evac {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

BodyPanel panel(std::string name, double area, double absorptivity, std::vector<Layer> layers) {
  return BodyPanel{std::move(name), std::move(layers), area, absorptivity};
}

WindowPanel window(std::string name, double area, double tilt_deg, double transmissivity,
                   double absorptivity, double shading) {
  return WindowPanel{std::move(name), area, tilt_deg * kDeg, transmissivity, absorptivity, shading};
}

CopMap default_cop_map() {
  std::vector<double> cabin{15, 20, 25, 30, 35, 40, 45};
  std::vector<double> ambient{20, 25, 30, 35, 40, 45, 50};
  std::vector<double> base;
  base.reserve(cabin.size() * ambient.size());
  for (double t_in : cabin) {
    for (double t_out : ambient) {
      const double v = 2.5 + 0.025 * (t_in - 25.0) - 0.045 * (t_out - 35.0);
      base.push_back(std::round(v * 1e4) / 1e4);
    }
  }
  return CopMap(std::move(cabin), std::move(ambient), std::move(base),
                {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
                {0.80, 0.84, 0.88, 0.92, 0.96, 0.99, 1.00, 1.00, 0.97, 0.90, 0.80});
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json layer_json(const Layer& l) {
  return {{"thickness_m", l.thickness_m}, {"conductivity_w_mk", l.conductivity_w_mk}};
}

}  // namespace

Grid GridSpec::build(const PlantLimits& limits) const {
  return Grid::uniform(temp_min_c, temp_max_c, temp_step_c, limits.q_cool_min_w,
                       limits.q_cool_max_w, q_step_w, dt_s);
}

void AppConfig::validate() const {
  vehicle.validate();
  cop_map.validate();
  plant.validate();
  cost.validate();
  bangbang.validate();
  grid.build(plant).validate(plant);
  if (smpc.controller.horizon == 0) throw ValidationError("smpc: horizon must be >= 1");
  if (!(sweep.duration_s > 0.0)) throw ValidationError("sweep: duration must be > 0");
  EnvironmentSample{0.0, simulation.ambient_c, simulation.solar_wm2, 0.0}.validate();
}

AppConfig default_config() {
  AppConfig c;
  const Layer steel{0.0008, 50.0};
  c.vehicle.panels = {
      panel("roof", 1.7, 0.5, {steel, {0.010, 0.04}, {0.004, 0.06}}),
      panel("doors_and_sides", 3.0, 0.5, {steel, {0.008, 0.04}, {0.003, 0.2}}),
      panel("front_wall", 1.1, 0.5, {steel, {0.012, 0.04}}),
      panel("rear_wall", 1.0, 0.5, {steel, {0.010, 0.04}}),
      panel("floor", 2.4, 0.1, {steel, {0.008, 0.04}, {0.006, 0.1}}),
      // Glass conducts too; its solar gain is carried by the windows below.
      panel("glazing", 3.4, 0.15, {{0.004, 1.0}}),
  };
  c.vehicle.windows = {
      window("windshield", 1.1, 62.0, 0.50, 0.15, 0.9),
      window("rear_window", 0.9, 58.0, 0.50, 0.15, 0.9),
      window("side_windows", 1.4, 20.0, 0.50, 0.15, 1.0),
  };
  c.vehicle.cabin = CabinAirConfig{
      .density_kg_m3 = 1.18,
      .volume_m3 = 4.8,
      .heat_capacity_j_kgk = 1005.0,
      .internal_air_speed_ms = 1.0,
      .recirculation = 0.0,
      .evaporator_mass_flow_kg_s = 0.186,
      .passengers = 4,
      .occupant_correction = 0.9,
  };
  c.vehicle.interior = InteriorConvection{3.0, 2.0};
  c.cop_map = default_cop_map();
  c.bangbang.hysteresis = true;
  c.simulation.ambient_c = 41.0;
  c.simulation.solar_wm2 = 300.0;
  return c;
}

std::string to_string(PredictionMode mode) {
  switch (mode) {
    case PredictionMode::argmax: return "argmax";
    case PredictionMode::expectation: return "expectation";
    case PredictionMode::sample: return "sample";
  }
  return "argmax";
}

PredictionMode prediction_mode_from_string(const std::string& s) {
  if (s == "argmax") return PredictionMode::argmax;
  if (s == "expectation") return PredictionMode::expectation;
  if (s == "sample") return PredictionMode::sample;
  throw ValidationError("unknown prediction mode '" + s + "'");
}

json config_to_json(const AppConfig& c) {
  json panels = json::array();
  for (const BodyPanel& p : c.vehicle.panels) {
    json layers = json::array();
    for (const Layer& l : p.layers) layers.push_back(layer_json(l));
    panels.push_back({{"name", p.name},
                      {"area_m2", p.area_m2},
                      {"absorptivity", p.absorptivity},
                      {"layers", layers}});
  }
  json windows = json::array();
  for (const WindowPanel& w : c.vehicle.windows) {
    windows.push_back({{"name", w.name},
                       {"area_m2", w.area_m2},
                       {"tilt_deg", w.tilt_rad / kDeg},
                       {"transmissivity", w.transmissivity},
                       {"absorptivity", w.absorptivity},
                       {"shading", w.shading}});
  }
  const CabinAirConfig& cab = c.vehicle.cabin;
  json base = json::array();
  for (std::size_t i = 0; i < c.cop_map.cabin_axis().size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < c.cop_map.ambient_axis().size(); ++j) {
      row.push_back(c.cop_map.base_node(i, j));
    }
    base.push_back(row);
  }
  auto vec = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
  return json{
      {"vehicle",
       {{"panels", panels},
        {"windows", windows},
        {"cabin",
         {{"density_kg_m3", cab.density_kg_m3},
          {"volume_m3", cab.volume_m3},
          {"heat_capacity_j_kgk", cab.heat_capacity_j_kgk},
          {"internal_air_speed_ms", cab.internal_air_speed_ms},
          {"recirculation", cab.recirculation},
          {"evaporator_mass_flow_kg_s", cab.evaporator_mass_flow_kg_s},
          {"passengers", cab.passengers},
          {"occupant_correction", cab.occupant_correction}}},
        {"interior_convection",
         {{"high_delta_coeff", c.vehicle.interior.high_delta_coeff},
          {"surface_air_delta_k", c.vehicle.interior.surface_air_delta_k}}}}},
      {"cop_map",
       {{"cabin_axis_c", vec(c.cop_map.cabin_axis().nodes())},
        {"ambient_axis_c", vec(c.cop_map.ambient_axis().nodes())},
        {"base", base},
        {"plr_axis", vec(c.cop_map.plr_axis().nodes())},
        {"plr_factor", vec(c.cop_map.plr_values())}}},
      {"plant",
       {{"q_cool_min_w", c.plant.q_cool_min_w},
        {"q_cool_max_w", c.plant.q_cool_max_w},
        {"rate_limit_w_s", c.plant.rate_limit_w_s},
        {"compressor_speed_min_rpm", c.plant.compressor_speed_min_rpm},
        {"compressor_speed_max_rpm", c.plant.compressor_speed_max_rpm},
        {"nominal_capacity_w", c.plant.nominal_capacity_w}}},
      {"cost",
       {{"energy_weight", c.cost.energy_weight},
        {"comfort_weight", c.cost.comfort_weight},
        {"target_c", c.cost.target_c}}},
      {"grid",
       {{"temp_min_c", c.grid.temp_min_c},
        {"temp_max_c", c.grid.temp_max_c},
        {"temp_step_c", c.grid.temp_step_c},
        {"q_step_w", c.grid.q_step_w},
        {"dt_s", c.grid.dt_s}}},
      {"bangbang",
       {{"t_high_c", c.bangbang.t_high_c},
        {"t_low_c", c.bangbang.t_low_c},
        {"k_rule_w", c.bangbang.k_rule_w},
        {"b_rule_w", c.bangbang.b_rule_w},
        {"hysteresis", c.bangbang.hysteresis}}},
      {"smpc",
       {{"horizon", c.smpc.controller.horizon},
        {"shrink_at_end", c.smpc.controller.shrink_at_end},
        {"prediction_mode", to_string(c.smpc.mode)},
        {"seed", c.smpc.seed}}},
      {"markov", {{"bin_width_kmh", c.quantizer.bin_width()}, {"v_max_kmh", c.quantizer.v_max()}}},
      {"simulation",
       {{"initial_temp_c", c.simulation.initial_temp_c},
        {"initial_q_w", c.simulation.initial_q_w},
        {"stats_skip_s", c.simulation.stats_skip_s},
        {"ambient_c", c.simulation.ambient_c},
        {"solar_wm2", c.simulation.solar_wm2}}},
      {"sweep", {{"duration_s", c.sweep.duration_s}}},
  };
}

AppConfig config_from_json(const json& doc) {
  AppConfig c = default_config();
  try {
    if (doc.contains("vehicle")) {
      const json& v = doc.at("vehicle");
      if (v.contains("panels")) {
        c.vehicle.panels.clear();
        for (const json& p : v.at("panels")) {
          BodyPanel bp;
          bp.name = p.value("name", std::string("panel"));
          bp.area_m2 = p.at("area_m2").get<double>();
          bp.absorptivity = p.at("absorptivity").get<double>();
          for (const json& l : p.value("layers", json::array())) {
            bp.layers.push_back(
                {l.at("thickness_m").get<double>(), l.at("conductivity_w_mk").get<double>()});
          }
          c.vehicle.panels.push_back(std::move(bp));
        }
      }
      if (v.contains("windows")) {
        c.vehicle.windows.clear();
        for (const json& w : v.at("windows")) {
          c.vehicle.windows.push_back(window(
              w.value("name", std::string("window")), w.at("area_m2").get<double>(),
              w.at("tilt_deg").get<double>(), w.at("transmissivity").get<double>(),
              w.at("absorptivity").get<double>(), w.value("shading", 1.0)));
        }
      }
      if (v.contains("cabin")) {
        const json& cab = v.at("cabin");
        CabinAirConfig& a = c.vehicle.cabin;
        read(cab, "density_kg_m3", a.density_kg_m3);
        read(cab, "volume_m3", a.volume_m3);
        read(cab, "heat_capacity_j_kgk", a.heat_capacity_j_kgk);
        read(cab, "internal_air_speed_ms", a.internal_air_speed_ms);
        read(cab, "recirculation", a.recirculation);
        read(cab, "evaporator_mass_flow_kg_s", a.evaporator_mass_flow_kg_s);
        read(cab, "passengers", a.passengers);
        read(cab, "occupant_correction", a.occupant_correction);
      }
      if (v.contains("interior_convection")) {
        const json& ic = v.at("interior_convection");
        read(ic, "high_delta_coeff", c.vehicle.interior.high_delta_coeff);
        read(ic, "surface_air_delta_k", c.vehicle.interior.surface_air_delta_k);
      }
    }
    if (doc.contains("cop_map")) {
      const json& m = doc.at("cop_map");
      std::vector<double> base;
      for (const json& row : m.at("base")) {
        for (const json& x : row) base.push_back(x.get<double>());
      }
      c.cop_map = CopMap(m.at("cabin_axis_c").get<std::vector<double>>(),
                         m.at("ambient_axis_c").get<std::vector<double>>(), std::move(base),
                         m.at("plr_axis").get<std::vector<double>>(),
                         m.at("plr_factor").get<std::vector<double>>());
    }
    if (doc.contains("plant")) {
      const json& p = doc.at("plant");
      read(p, "q_cool_min_w", c.plant.q_cool_min_w);
      read(p, "q_cool_max_w", c.plant.q_cool_max_w);
      read(p, "rate_limit_w_s", c.plant.rate_limit_w_s);
      read(p, "compressor_speed_min_rpm", c.plant.compressor_speed_min_rpm);
      read(p, "compressor_speed_max_rpm", c.plant.compressor_speed_max_rpm);
      read(p, "nominal_capacity_w", c.plant.nominal_capacity_w);
    }
    if (doc.contains("cost")) {
      const json& p = doc.at("cost");
      read(p, "energy_weight", c.cost.energy_weight);
      read(p, "comfort_weight", c.cost.comfort_weight);
      read(p, "target_c", c.cost.target_c);
    }
    if (doc.contains("grid")) {
      const json& p = doc.at("grid");
      read(p, "temp_min_c", c.grid.temp_min_c);
      read(p, "temp_max_c", c.grid.temp_max_c);
      read(p, "temp_step_c", c.grid.temp_step_c);
      read(p, "q_step_w", c.grid.q_step_w);
      read(p, "dt_s", c.grid.dt_s);
    }
    if (doc.contains("bangbang")) {
      const json& p = doc.at("bangbang");
      read(p, "t_high_c", c.bangbang.t_high_c);
      read(p, "t_low_c", c.bangbang.t_low_c);
      read(p, "k_rule_w", c.bangbang.k_rule_w);
      read(p, "b_rule_w", c.bangbang.b_rule_w);
      read(p, "hysteresis", c.bangbang.hysteresis);
    }
    if (doc.contains("smpc")) {
      const json& p = doc.at("smpc");
      read(p, "horizon", c.smpc.controller.horizon);
      read(p, "shrink_at_end", c.smpc.controller.shrink_at_end);
      read(p, "seed", c.smpc.seed);
      if (p.contains("prediction_mode")) {
        c.smpc.mode = prediction_mode_from_string(p.at("prediction_mode").get<std::string>());
      }
    }
    if (doc.contains("markov")) {
      const json& p = doc.at("markov");
      c.quantizer = VelocityQuantizer(p.value("bin_width_kmh", c.quantizer.bin_width()),
                                      p.value("v_max_kmh", c.quantizer.v_max()));
    }
    if (doc.contains("simulation")) {
      const json& p = doc.at("simulation");
      read(p, "initial_temp_c", c.simulation.initial_temp_c);
      read(p, "initial_q_w", c.simulation.initial_q_w);
      read(p, "stats_skip_s", c.simulation.stats_skip_s);
      read(p, "ambient_c", c.simulation.ambient_c);
      read(p, "solar_wm2", c.simulation.solar_wm2);
    }
    if (doc.contains("sweep")) read(doc.at("sweep"), "duration_s", c.sweep.duration_s);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void save_config(const std::filesystem::path& path, const AppConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write config file " + path.string());
  out << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace evac
