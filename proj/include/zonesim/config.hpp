#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zonesim/types.hpp"

namespace zonesim {

enum class ControlVariant : int { no_control = 1, reactive = 2, mpc = 3 };

struct AhuParams {
  double heating_efficiency = 0.9;
  double cooling_efficiency = 0.9;
  bool operator==(const AhuParams&) const = default;
};

struct RoomParams {
  double thermal_capacity = 2000.0;            // kJ/K
  double heat_transfer_coeff_outside = 0.048;  // kJ/(K s)
  double equipment_load = 0.1;                 // kW, while supply air runs
  double occupant_load = 0.1;                  // kW per occupied room
  double fan_coefficient = 0.094;
  double wall_coeff = 0.024;                   // kJ/(K s) between adjacent rooms
  bool operator==(const RoomParams&) const = default;
};

struct AirParams {
  double density = 1.225;        // kg/m^3
  double specific_heat = 1.003;  // kJ/(kg K)
  bool operator==(const AirParams&) const = default;
};

struct PmvCoefficients {
  double p1 = 0.2466;
  double p2 = 1.4075;
  double p3 = 0.581;
  double p4 = 5.4468;
  bool operator==(const PmvCoefficients&) const = default;
};

struct ComfortBand {
  double pmv_lower = -0.5;
  double pmv_upper = 0.5;
  bool operator==(const ComfortBand&) const = default;
};

struct ErrorParams {
  double occupancy = 5.0;             // percent
  double external_temperature = 0.0;  // percent
  double tolerance = 1.0;             // percentage points around the target
  bool operator==(const ErrorParams&) const = default;
};

struct FileParams {
  std::string weather;
  std::string occupancy;
  std::string output;
  bool operator==(const FileParams&) const = default;
};

struct MpcParams {
  double lambda = 1.0;  // kWh charged per unit of discomfort per step
  std::vector<double> tsa_grid = {12, 14, 16, 30, 35, 40};        // deg C
  std::vector<double> airflow_grid = {0, 0.1, 0.25, 0.5, 1.0};    // m^3/s
  bool operator==(const MpcParams&) const = default;
};

struct ReactiveParams {
  double deadband = 0.1;  // PMV hysteresis width
  bool operator==(const ReactiveParams&) const = default;
};

struct SimulationConfig {
  int zones = 1;
  int rooms = 5;
  Timestamp start = 0;
  Timestamp stop = 0;
  int horizon_hours = 4;
  std::int64_t time_step = 600;  // tau, seconds
  ControlVariant control = ControlVariant::reactive;
  AhuParams ahu;
  RoomParams room;
  AirParams air;
  PmvCoefficients pmv;
  ComfortBand comfort;
  ErrorParams error;
  FileParams files;
  MpcParams mpc;
  ReactiveParams reactive;
  int replicates = 15;
  std::uint64_t rng_seed = 0;
  std::optional<double> initial_temperature;  // defaults to first weather sample

  bool operator==(const SimulationConfig&) const = default;
};

// Parses the brace-and-key-value description. Keys may contain spaces,
// values may carry unit suffixes ("2000 kJ/K", "5%"), "//" comments run to
// the end of the line and unknown keys are ignored. Only start and stop are
// required; everything else falls back to the defaults above.
SimulationConfig parse_config(std::string_view text);

SimulationConfig load_config(const std::filesystem::path& path);

// Canonical form; parse_config(print_config(c)) == c for any valid config.
std::string print_config(const SimulationConfig& config);

// Range and consistency checks (Errc::out_of_range_value on violation).
void validate_config(const SimulationConfig& config);

}  // namespace zonesim
