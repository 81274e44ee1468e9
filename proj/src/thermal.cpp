#include "zonesim/thermal.hpp"

#include <cmath>
#include <string>

#include "zonesim/error.hpp"

namespace zonesim {

BuildingPhysics physics_from_config(const SimulationConfig& c) {
  BuildingPhysics p;
  p.thermal_capacity = c.room.thermal_capacity;
  p.outside_coeff = c.room.heat_transfer_coeff_outside;
  p.wall_coeff = c.room.wall_coeff;
  p.equipment_load = c.room.equipment_load;
  p.occupant_load = c.room.occupant_load;
  p.fan_coefficient = c.room.fan_coefficient;
  p.air_density = c.air.density;
  p.air_specific_heat = c.air.specific_heat;
  p.heating_efficiency = c.ahu.heating_efficiency;
  p.cooling_efficiency = c.ahu.cooling_efficiency;
  return p;
}

void euler_step_into(const Eigen::Ref<const Vector>& temperatures, double tsa,
                     const Eigen::Ref<const Vector>& airflow, double t_out,
                     const Eigen::Ref<const BitVector>& occupancy,
                     const BuildingPhysics& physics, double tau, Vector& out) {
  const Eigen::Index n = temperatures.size();
  out.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double flow = physics.outside_coeff * (t_out - temperatures[j]);  // kW
    if (j > 0) flow += physics.wall_coeff * (temperatures[j - 1] - temperatures[j]);
    if (j + 1 < n) flow += physics.wall_coeff * (temperatures[j + 1] - temperatures[j]);
    if (occupancy[j]) flow += physics.occupant_load;
    if (airflow[j] > 0) {
      flow += physics.equipment_load;
      flow += physics.air_density * airflow[j] * physics.air_specific_heat *
              (tsa - temperatures[j]);
    }
    out[j] = temperatures[j] + tau / physics.thermal_capacity * flow;
  }
}

RoomState step(const RoomState& state, const ControlInput& input, double t_out,
               const BitVector& occupancy, const BuildingPhysics& physics,
               double tau) {
  const Eigen::Index n = state.rooms();
  const double max_airflow = n > 0 ? input.airflow.maxCoeff() : 0.0;
  if (tau >= stability_bound(physics, max_airflow)) {
    throw Error(Errc::integration_unstable,
                "step " + std::to_string(tau) +
                    " s is at or above the Euler stability bound");
  }

  RoomState next;
  euler_step_into(state.temperatures, input.supply_air_temperature,
                  input.airflow, t_out, occupancy, physics, tau,
                  next.temperatures);

  if (!next.temperatures.allFinite() ||
      next.temperatures.minCoeff() < kMinSaneTemperature ||
      next.temperatures.maxCoeff() > kMaxSaneTemperature) {
    throw Error(Errc::integration_unstable,
                "room temperature left the sane envelope [-40, 60] C");
  }
  return next;
}

double power_value(double tsa, const Eigen::Ref<const Vector>& airflow,
                   double t_return, const BuildingPhysics& physics) {
  const double efficiency = tsa > t_return ? physics.heating_efficiency
                                           : physics.cooling_efficiency;
  double fan = 0;
  double volume = 0;
  for (Eigen::Index j = 0; j < airflow.size(); ++j) {
    fan += physics.fan_coefficient * airflow[j] * airflow[j] * airflow[j];
    volume += airflow[j];
  }
  const double conditioning = physics.air_density * volume *
                              physics.air_specific_heat *
                              std::abs(tsa - t_return);
  return fan + conditioning / efficiency;
}

double power(const ControlInput& input, const RoomState& state,
             const BuildingPhysics& physics) {
  return power_value(input.supply_air_temperature, input.airflow,
                     state.temperatures.mean(), physics);
}

double stability_bound(const BuildingPhysics& physics, double max_airflow) {
  // Worst-case per-room outflow coefficient; interior rooms of the chain
  // touch two neighbours.
  const double drain = physics.outside_coeff + 2.0 * physics.wall_coeff +
                       physics.air_density * max_airflow * physics.air_specific_heat;
  return physics.thermal_capacity / drain;
}

}  // namespace zonesim
