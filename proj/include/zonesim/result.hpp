#pragma once

#include "zonesim/types.hpp"

namespace zonesim {

// Everything one simulation records, step by step. Row t describes the
// interval [start + t*tau, start + (t+1)*tau): the state the controller saw,
// the input it applied and the realized occupancy.
struct SimulationResult {
  Timestamp start = 0;
  double tau = 0;
  Matrix temperatures;             // steps x rooms, deg C
  BitMatrix occupancy;             // steps x rooms, realized bits
  Matrix airflow;                  // steps x rooms, m^3/s
  Vector supply_air_temperature;   // steps
  Vector power;                    // steps, kW
  Vector outside;                  // steps, realized deg C

  Eigen::Index steps() const { return power.size(); }
  Eigen::Index rooms() const { return temperatures.cols(); }
};

}  // namespace zonesim
