#pragma once

#include "zonesim/config.hpp"
#include "zonesim/types.hpp"

namespace zonesim {

// Per-room lumped RC parameters. Rooms sit in series (the zone layout walls
// each room to its index neighbours); one face exchanges with the outside.
struct BuildingPhysics {
  double thermal_capacity = 2000.0;  // C, kJ/K
  double outside_coeff = 0.048;      // U, kJ/(K s)
  double wall_coeff = 0.024;         // between adjacent rooms, kJ/(K s)
  double equipment_load = 0.1;       // kW, while the room's supply air runs
  double occupant_load = 0.1;        // kW per occupied room
  double fan_coefficient = 0.094;
  double air_density = 1.225;        // kg/m^3
  double air_specific_heat = 1.003;  // kJ/(kg K)
  double heating_efficiency = 0.9;
  double cooling_efficiency = 0.9;
};

BuildingPhysics physics_from_config(const SimulationConfig& config);

struct RoomState {
  Vector temperatures;  // deg C per room

  Eigen::Index rooms() const { return temperatures.size(); }
};

// One AHU serves the zone: a shared supply air temperature plus a per-room
// supply volume. Fan speed equals airflow numerically (1 m^2 duct area).
struct ControlInput {
  double supply_air_temperature = 0;  // deg C
  Vector airflow;                     // m^3/s per room, >= 0

  const Vector& fan_speed() const { return airflow; }
};

inline ControlInput hvac_off(Eigen::Index rooms, double return_air) {
  return {return_air, Vector::Zero(rooms)};
}

// Integration blows up outside this envelope regardless of the step bound.
inline constexpr double kMinSaneTemperature = -40.0;
inline constexpr double kMaxSaneTemperature = 60.0;

// Advances room temperatures by one explicit Euler step of length tau.
// Heat flows per room: outside conduction, inter-room wall conduction,
// occupant and equipment loads, and supply-air enthalpy exchange.
RoomState step(const RoomState& state, const ControlInput& input, double t_out,
               const BitVector& occupancy, const BuildingPhysics& physics,
               double tau);

// The same update without the stability and envelope guards, writing into a
// caller-owned buffer. Planners roll many candidate trajectories through
// this; a diverging candidate simply prices itself out of selection.
void euler_step_into(const Eigen::Ref<const Vector>& temperatures, double tsa,
                     const Eigen::Ref<const Vector>& airflow, double t_out,
                     const Eigen::Ref<const BitVector>& occupancy,
                     const BuildingPhysics& physics, double tau, Vector& out);

// Conditioning plus fan draw for a bare (tsa, airflow) pair.
double power_value(double tsa, const Eigen::Ref<const Vector>& airflow,
                   double t_return, const BuildingPhysics& physics);

// Instantaneous electrical draw: cube-law fan power plus conditioning power
// referenced to the return air (mean room temperature).
double power(const ControlInput& input, const RoomState& state,
             const BuildingPhysics& physics);

// Largest explicit Euler step that cannot diverge; step() wants tau below it.
double stability_bound(const BuildingPhysics& physics, double max_airflow);

}  // namespace zonesim
