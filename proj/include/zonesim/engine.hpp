#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zonesim/config.hpp"
#include "zonesim/control.hpp"
#include "zonesim/result.hpp"
#include "zonesim/thermal.hpp"
#include "zonesim/timeseries.hpp"

namespace zonesim {

// One simulation: realized weather plus two occupancy views. The controller
// only ever sees forecast_occupancy; realized heat loads and the comfort
// bookkeeping use true_occupancy.
struct SimulationRun {
  SimulationConfig config;
  TimeSeries weather;                           // [start, stop) at step tau
  std::vector<TimeSeries> true_occupancy;       // per room, same window
  std::vector<TimeSeries> forecast_occupancy;   // per room, same window
  std::optional<RoomState> initial_state;       // default: first weather sample
};

SimulationResult simulate(const SimulationRun& run);

// Multiplies every sample by (1 + u), u uniform in [-percent/100,
// +percent/100] from the seeded stream; percent = 0 is the identity.
TimeSeries perturb_weather(const TimeSeries& weather, double percent,
                           std::uint64_t seed);

// Config files loaded, sliced to [start, stop) and preprocessed to the
// simulation step. The occupancy database keeps every whole day the input
// file covers, not just the simulation window.
struct PreparedInputs {
  TimeSeries weather;                 // simulation window
  std::vector<TimeSeries> occupancy;  // per room, simulation window
  std::vector<TimeSeries> occupancy_database;  // per room, whole-day span
  bool broadcast = false;
};

PreparedInputs load_inputs(const SimulationConfig& config);

// Assembles a run over [start, stop) from prepared inputs; null forecast
// means perfect prediction (forecast == truth).
SimulationRun make_run(const SimulationConfig& config,
                       const PreparedInputs& inputs, Timestamp start,
                       Timestamp stop,
                       const std::vector<TimeSeries>* forecast = nullptr);

}  // namespace zonesim
