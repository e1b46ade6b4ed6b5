#include "evac/simulation.hpp"

#include <cmath>
#include <iomanip>
#include <string>

#include "evac/errors.hpp"

namespace evac {

void Mission::validate() const {
  if (!disturbances) throw ValidationError("mission '" + name + "': missing disturbances");
  if (disturbances->samples.size() != disturbances->speed_kmh.size()) {
    throw ValidationError("mission '" + name + "': speed and environment traces differ in length");
  }
  if (!(dt_s > 0.0)) throw ValidationError("mission '" + name + "': dt must be > 0");
  if (!std::isfinite(initial_temp_c) || !std::isfinite(initial_q_w)) {
    throw ValidationError("mission '" + name + "': non-finite initial state");
  }
  for (std::size_t k = 0; k < disturbances->samples.size(); ++k) {
    try {
      disturbances->samples[k].validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("mission '") + name + "': " + e.what(), k + 1);
    }
  }
}

Mission make_mission(std::string name, std::span<const double> speed_kmh,
                     std::span<const double> ambient_c, std::span<const double> solar_wm2,
                     double initial_temp_c, double initial_q_w, double dt_s) {
  if (ambient_c.size() != speed_kmh.size() || solar_wm2.size() != speed_kmh.size()) {
    throw ValidationError("mission '" + name + "': traces are not time-aligned");
  }
  auto trace = std::make_shared<DisturbanceTrace>();
  trace->speed_kmh.assign(speed_kmh.begin(), speed_kmh.end());
  trace->samples.reserve(speed_kmh.size());
  for (std::size_t k = 0; k < speed_kmh.size(); ++k) {
    trace->samples.push_back(EnvironmentSample{
        .time_s = static_cast<double>(k) * dt_s,
        .ambient_c = ambient_c[k],
        .solar_wm2 = solar_wm2[k],
        .air_speed_ms = kmh_to_ms(speed_kmh[k]),
    });
  }
  Mission m{std::move(name), std::move(trace), initial_temp_c, initial_q_w, dt_s};
  m.validate();
  return m;
}

SimulationTrace run(const Mission& mission, Controller& controller, const CabinPlant& plant) {
  mission.validate();
  SimulationTrace trace;
  trace.mission = mission.name;
  trace.controller = std::string(controller.name());
  trace.dt_s = mission.dt_s;
  const DisturbanceTrace& d = *mission.disturbances;
  trace.rows.reserve(d.samples.size());

  double temp = mission.initial_temp_c;
  double q_prev = mission.initial_q_w;
  double energy = 0.0;
  for (std::size_t k = 0; k < d.samples.size(); ++k) {
    const EnvironmentSample& env = d.samples[k];
    const ControllerInput in{k, env.time_s, temp, q_prev, d.speed_kmh[k], env};
    const double requested = controller.command(in);
    if (!std::isfinite(requested)) {
      throw DomainError("simulation: non-finite command at step " + std::to_string(k));
    }
    const double q = clamp_command(q_prev, requested, mission.dt_s, plant.limits());
    const LoadModel loads(plant.vehicle(), env);
    const double cop = plant.cop_at(temp, env.ambient_c, q);
    const double power = plant.power(temp, env.ambient_c, q);
    energy += power * mission.dt_s;

    trace.rows.push_back(TraceRow{
        .time_s = env.time_s,
        .speed_kmh = d.speed_kmh[k],
        .ambient_c = env.ambient_c,
        .solar_wm2 = env.solar_wm2,
        .temp_c = temp,
        .q_cool_w = q,
        .power_w = power,
        .cop = cop,
        .loads = loads.at(temp),
        .energy_j = energy,
    });

    temp = plant.integrate(loads, temp, q, mission.dt_s);
    q_prev = q;
    if (!std::isfinite(temp)) {
      throw DomainError("simulation: non-finite cabin temperature after step " + std::to_string(k));
    }
  }
  trace.final_temp_c = temp;
  return trace;
}

RunMetrics metrics(const SimulationTrace& trace, const SimulationTrace* baseline,
                   const MetricsOptions& options) {
  if (trace.rows.empty()) throw ValidationError("metrics: empty trace");
  RunMetrics m;
  m.total_energy_j = trace.rows.back().energy_j;

  std::size_t n = 0;
  double sum = 0.0;
  for (const TraceRow& r : trace.rows) {
    if (r.time_s < options.skip_initial_s) continue;
    sum += r.temp_c;
    ++n;
  }
  if (n == 0) throw ValidationError("metrics: no samples after the skipped interval");
  m.mean_temp_c = sum / static_cast<double>(n);
  double sq = 0.0;
  for (const TraceRow& r : trace.rows) {
    if (r.time_s < options.skip_initial_s) continue;
    const double d = r.temp_c - m.mean_temp_c;
    sq += d * d;
  }
  m.temp_std_c = std::sqrt(sq / static_cast<double>(n));

  if (baseline != nullptr) {
    if (baseline->rows.empty()) throw ValidationError("metrics: empty baseline trace");
    m.saving = 1.0 - m.total_energy_j / baseline->rows.back().energy_j;
  }
  return m;
}

double trace_cost(const SimulationTrace& trace, const StageCost& cost) {
  double j = 0.0;
  for (const TraceRow& r : trace.rows) j += stage_cost(r.power_w, r.temp_c, cost, trace.dt_s);
  return j;
}

std::vector<double> scale_cycle(std::span<const double> speed_kmh, double factor) {
  if (!(factor > 0.0)) throw DomainError("scale_cycle: factor must be > 0");
  std::vector<double> out(speed_kmh.begin(), speed_kmh.end());
  for (double& v : out) v *= factor;
  return out;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "time_s,speed_kmh,ambient_c,solar_wm2,cabin_c,q_cool_w,power_w,cop,"
         "q_conduction_w,q_radiation_w,q_occupants_w,q_ventilation_w,energy_j\n";
  out << std::setprecision(10);
  for (const TraceRow& r : trace.rows) {
    out << r.time_s << ',' << r.speed_kmh << ',' << r.ambient_c << ',' << r.solar_wm2 << ','
        << r.temp_c << ',' << r.q_cool_w << ',' << r.power_w << ',' << r.cop << ','
        << r.loads.conduction_w << ',' << r.loads.radiation_w << ',' << r.loads.occupants_w << ','
        << r.loads.ventilation_w << ',' << r.energy_j << '\n';
  }
}

}  // namespace evac
