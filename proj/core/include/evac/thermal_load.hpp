#pragma once

// Cabin thermal loads: conduction through the opaque body, solar radiation
// through glazing, occupant sensible heat, ventilation, and the resulting
// cabin-air temperature derivative.
//
// Units: temperatures in degC, heat flows in W, solar flux density in W/m^2,
// speeds in m/s unless a name says otherwise.

#include <span>
#include <string>
#include <vector>

namespace evac {

struct Layer {
  double thickness_m = 0.0;
  double conductivity_w_mk = 0.0;
};

struct BodyPanel {
  std::string name;
  std::vector<Layer> layers;
  double area_m2 = 0.0;
  double absorptivity = 0.0;  // outer surface, [0, 1]

  void validate() const;
};

struct WindowPanel {
  std::string name;
  double area_m2 = 0.0;
  double tilt_rad = 0.0;         // angle from vertical, [0, pi/2]
  double transmissivity = 0.0;   // solar input coefficient
  double absorptivity = 0.0;     // glass absorptivity
  double shading = 1.0;          // shading correction, (0, 1]

  void validate() const;
};

struct CabinAirConfig {
  double density_kg_m3 = 1.18;
  double volume_m3 = 2.6;
  double heat_capacity_j_kgk = 1005.0;
  double internal_air_speed_ms = 1.0;
  double recirculation = 0.5;
  double evaporator_mass_flow_kg_s = 0.186;
  int passengers = 4;
  double occupant_correction = 0.9;

  void validate() const;
};

// Interior-side convection. The surface-to-air temperature difference is a
// fixed configuration value because surface temperatures are not states of
// the cabin model.
struct InteriorConvection {
  double high_delta_coeff = 3.0;     // c in c * dt^0.25, within [2.67, 3.26]
  double surface_air_delta_k = 2.0;

  void validate() const;
};

struct VehicleThermalConfig {
  std::vector<BodyPanel> panels;
  std::vector<WindowPanel> windows;
  CabinAirConfig cabin;
  InteriorConvection interior;

  void validate() const;
};

struct EnvironmentSample {
  double time_s = 0.0;
  double ambient_c = 0.0;
  double solar_wm2 = 0.0;
  double air_speed_ms = 0.0;  // relative to the body; equals vehicle speed

  void validate() const;
};

struct ThermalLoads {
  double conduction_w = 0.0;
  double radiation_w = 0.0;
  double occupants_w = 0.0;
  double ventilation_w = 0.0;

  double total() const { return conduction_w + radiation_w + occupants_w + ventilation_w; }
};

inline constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }

double external_convective_coeff(double air_speed_ms);

// Piecewise empirical correlation in the surface-to-air temperature
// difference. Exactly 5 K selects the power-law branch.
double internal_convective_coeff(double surface_delta_k, double cabin_air_speed_ms,
                                 double high_delta_coeff = 3.0);

double heat_transfer_coeff(const BodyPanel& panel, double alpha_ext, double alpha_int);

double conduction_load(std::span<const BodyPanel> panels, double ambient_c, double cabin_c,
                       double solar_wm2, double alpha_ext, double alpha_int);

double radiation_load(std::span<const WindowPanel> windows, double solar_wm2, double alpha_ext,
                      double alpha_int);

// Passengers only are scaled by the correction; the driver adds 145 W.
double occupant_load(int passengers, double correction);

double ventilation_load(const CabinAirConfig& cabin, double ambient_c, double cabin_c);

// rho * V * cp of the cabin air, J/K.
double cabin_heat_capacity(const CabinAirConfig& cabin);

double cabin_temp_derivative(const ThermalLoads& loads, double q_cool_w, const CabinAirConfig& cabin);

// Loads for one environment sample, with everything that does not depend on
// the cabin temperature evaluated once. Conduction and ventilation are affine
// in the cabin temperature, so at() is cheap enough for DP inner loops.
class LoadModel {
 public:
  LoadModel(const VehicleThermalConfig& vehicle, const EnvironmentSample& env);

  ThermalLoads at(double cabin_c) const;
  double total(double cabin_c) const { return offset_w_ - slope_w_k_ * cabin_c; }

  // d(total)/d(cabin_c) is -slope.
  double slope_w_k() const { return slope_w_k_; }
  double alpha_ext() const { return alpha_ext_; }
  double alpha_int() const { return alpha_int_; }

 private:
  double alpha_ext_;
  double alpha_int_;
  double conduction_ua_;       // sum K*F
  double conduction_offset_;   // sum K*F*(T_out + rho*I/alpha_w)
  double radiation_w_;
  double occupants_w_;
  double ventilation_ua_;      // m_e*(1-xi)*cp
  double ambient_c_;
  double offset_w_;
  double slope_w_k_;
};

}  // namespace evac
