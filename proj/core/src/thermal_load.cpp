#include "evac/thermal_load.hpp"

#include <cmath>
#include <numbers>

#include "evac/errors.hpp"

namespace evac {

namespace {

constexpr double kDriverHeatW = 145.0;
constexpr double kPassengerHeatW = 116.0;

// Low-delta branch coefficients of the interior correlation.
constexpr double kInteriorA = 3.49;
constexpr double kInteriorB = 0.093;
constexpr double kBranchDeltaK = 5.0;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

void BodyPanel::validate() const {
  require(area_m2 > 0.0, "panel '" + name + "': area must be > 0");
  require(absorptivity >= 0.0 && absorptivity <= 1.0,
          "panel '" + name + "': absorptivity must lie in [0, 1]");
  for (const Layer& layer : layers) {
    require(layer.thickness_m > 0.0, "panel '" + name + "': layer thickness must be > 0");
    require(layer.conductivity_w_mk > 0.0, "panel '" + name + "': layer conductivity must be > 0");
  }
}

void WindowPanel::validate() const {
  require(area_m2 > 0.0, "window '" + name + "': area must be > 0");
  require(tilt_rad >= 0.0 && tilt_rad <= std::numbers::pi / 2.0 + 1e-12,
          "window '" + name + "': tilt must lie in [0, pi/2]");
  require(transmissivity >= 0.0 && absorptivity >= 0.0 && transmissivity + absorptivity <= 1.0,
          "window '" + name + "': transmissivity + absorptivity must lie in [0, 1]");
  require(shading > 0.0 && shading <= 1.0, "window '" + name + "': shading must lie in (0, 1]");
}

void CabinAirConfig::validate() const {
  require(density_kg_m3 > 0.0, "cabin: density must be > 0");
  require(volume_m3 > 0.0, "cabin: volume must be > 0");
  require(heat_capacity_j_kgk > 0.0, "cabin: heat capacity must be > 0");
  require(internal_air_speed_ms > 0.0, "cabin: internal air speed must be > 0");
  require(recirculation >= 0.0 && recirculation <= 1.0, "cabin: recirculation must lie in [0, 1]");
  require(evaporator_mass_flow_kg_s > 0.0, "cabin: evaporator mass flow must be > 0");
  require(passengers >= 0, "cabin: passengers must be >= 0");
  require(occupant_correction > 0.0, "cabin: occupant correction must be > 0");
}

void InteriorConvection::validate() const {
  require(high_delta_coeff >= 2.67 && high_delta_coeff <= 3.26,
          "interior convection: coefficient c must lie in [2.67, 3.26]");
  require(surface_air_delta_k >= 0.0, "interior convection: surface delta must be >= 0");
}

void VehicleThermalConfig::validate() const {
  for (const BodyPanel& p : panels) p.validate();
  for (const WindowPanel& w : windows) w.validate();
  cabin.validate();
  interior.validate();
  if (cabin.internal_air_speed_ms < 0.25 || cabin.internal_air_speed_ms > 3.0) {
    throw ValidationError("cabin: internal air speed must lie in [0.25, 3] m/s");
  }
}

void EnvironmentSample::validate() const {
  require(std::isfinite(ambient_c) && ambient_c >= -50.0 && ambient_c <= 60.0,
          "environment: ambient temperature must lie in [-50, 60] degC");
  require(std::isfinite(solar_wm2) && solar_wm2 >= 0.0, "environment: solar flux must be >= 0");
  require(std::isfinite(air_speed_ms) && air_speed_ms >= 0.0,
          "environment: air speed must be >= 0");
}

double external_convective_coeff(double air_speed_ms) {
  if (!(air_speed_ms >= 0.0)) {
    throw DomainError("external_convective_coeff: air speed must be >= 0");
  }
  return 1.163 * (4.0 + 12.0 * std::sqrt(air_speed_ms));
}

double internal_convective_coeff(double surface_delta_k, double cabin_air_speed_ms,
                                 double high_delta_coeff) {
  if (!(cabin_air_speed_ms >= 0.25 && cabin_air_speed_ms <= 3.0)) {
    throw DomainError("internal_convective_coeff: cabin air speed outside [0.25, 3] m/s");
  }
  if (!(surface_delta_k >= 0.0)) {
    throw DomainError("internal_convective_coeff: temperature difference must be >= 0");
  }
  if (surface_delta_k < kBranchDeltaK) {
    return kInteriorA + kInteriorB * surface_delta_k;
  }
  return high_delta_coeff * std::pow(surface_delta_k, 0.25);
}

double heat_transfer_coeff(const BodyPanel& panel, double alpha_ext, double alpha_int) {
  if (!(alpha_ext > 0.0 && alpha_int > 0.0)) {
    throw DomainError("heat_transfer_coeff: convective coefficients must be > 0");
  }
  double resistance = 1.0 / alpha_ext + 1.0 / alpha_int;
  for (const Layer& layer : panel.layers) {
    resistance += layer.thickness_m / layer.conductivity_w_mk;
  }
  return 1.0 / resistance;
}

double conduction_load(std::span<const BodyPanel> panels, double ambient_c, double cabin_c,
                       double solar_wm2, double alpha_ext, double alpha_int) {
  double q = 0.0;
  for (const BodyPanel& panel : panels) {
    const double k = heat_transfer_coeff(panel, alpha_ext, alpha_int);
    const double sol_air = ambient_c + panel.absorptivity * solar_wm2 / alpha_ext;
    q += k * panel.area_m2 * (sol_air - cabin_c);
  }
  return q;
}

double radiation_load(std::span<const WindowPanel> windows, double solar_wm2, double alpha_ext,
                      double alpha_int) {
  if (!(solar_wm2 >= 0.0)) throw DomainError("radiation_load: solar flux must be >= 0");
  double q = 0.0;
  for (const WindowPanel& w : windows) {
    const double flux =
        (w.transmissivity * solar_wm2 + w.absorptivity * solar_wm2 * alpha_int / alpha_ext) *
        w.shading;
    q += flux * w.area_m2 * std::sin(w.tilt_rad);
  }
  return q;
}

double occupant_load(int passengers, double correction) {
  return kPassengerHeatW * passengers * correction + kDriverHeatW;
}

double ventilation_load(const CabinAirConfig& cabin, double ambient_c, double cabin_c) {
  return cabin.evaporator_mass_flow_kg_s * (1.0 - cabin.recirculation) *
         cabin.heat_capacity_j_kgk * (ambient_c - cabin_c);
}

double cabin_heat_capacity(const CabinAirConfig& cabin) {
  return cabin.density_kg_m3 * cabin.volume_m3 * cabin.heat_capacity_j_kgk;
}

double cabin_temp_derivative(const ThermalLoads& loads, double q_cool_w,
                             const CabinAirConfig& cabin) {
  return (loads.total() - q_cool_w) / cabin_heat_capacity(cabin);
}

LoadModel::LoadModel(const VehicleThermalConfig& vehicle, const EnvironmentSample& env)
    : alpha_ext_(external_convective_coeff(env.air_speed_ms)),
      alpha_int_(internal_convective_coeff(vehicle.interior.surface_air_delta_k,
                                           vehicle.cabin.internal_air_speed_ms,
                                           vehicle.interior.high_delta_coeff)),
      conduction_ua_(0.0),
      conduction_offset_(0.0),
      radiation_w_(radiation_load(vehicle.windows, env.solar_wm2, alpha_ext_, alpha_int_)),
      occupants_w_(occupant_load(vehicle.cabin.passengers, vehicle.cabin.occupant_correction)),
      ventilation_ua_(vehicle.cabin.evaporator_mass_flow_kg_s * (1.0 - vehicle.cabin.recirculation) *
                      vehicle.cabin.heat_capacity_j_kgk),
      ambient_c_(env.ambient_c) {
  for (const BodyPanel& panel : vehicle.panels) {
    const double ua = heat_transfer_coeff(panel, alpha_ext_, alpha_int_) * panel.area_m2;
    conduction_ua_ += ua;
    conduction_offset_ += ua * (env.ambient_c + panel.absorptivity * env.solar_wm2 / alpha_ext_);
  }
  slope_w_k_ = conduction_ua_ + ventilation_ua_;
  offset_w_ = conduction_offset_ + radiation_w_ + occupants_w_ + ventilation_ua_ * ambient_c_;
}

ThermalLoads LoadModel::at(double cabin_c) const {
  return ThermalLoads{
      .conduction_w = conduction_offset_ - conduction_ua_ * cabin_c,
      .radiation_w = radiation_w_,
      .occupants_w = occupants_w_,
      .ventilation_w = ventilation_ua_ * (ambient_c_ - cabin_c),
  };
}

}  // namespace evac
