#pragma once

#include <optional>

#include "zonesim/config.hpp"
#include "zonesim/thermal.hpp"
#include "zonesim/types.hpp"

namespace zonesim {

// Everything a strategy needs at decision time. horizon_steps counts fast
// (tau) steps; the config expresses the horizon in hours.
struct ControlStrategy {
  ControlVariant variant = ControlVariant::reactive;
  ReactiveParams reactive;
  MpcParams mpc;
  int horizon_steps = 24;
  ComfortBand band;
  PmvCoefficients pmv;
};

ControlStrategy strategy_from_config(const SimulationConfig& config);

// What the controller believes about the future: outside temperature and
// per-room occupancy bits for the steps ahead, row 0 being the current step.
struct Forecast {
  Vector outside;       // horizon
  BitMatrix occupancy;  // horizon x rooms

  Eigen::Index steps() const { return outside.size(); }
};

// HVAC off: zero airflow everywhere, supply air idling at return air.
ControlInput no_control(const RoomState& state);

// Occupancy-gated bang-bang on the PMV band with hysteresis. Rooms whose
// demand opposes the zone's supply temperature sit this step out; rooms
// inside the hysteresis region hold their previous airflow.
ControlInput reactive(const RoomState& state, const BitVector& occupancy_now,
                      double t_out, const ControlInput& previous,
                      const BuildingPhysics& physics,
                      const ControlStrategy& strategy, double tau);

struct MpcPlan {
  ControlInput first_step;
  double objective = 0;              // kWh plus lambda-weighted discomfort
  double supply_air_temperature = 0; // chosen (or held) for the horizon
  Matrix airflow;                    // horizon x rooms, the full plan
};

// Receding-horizon plan over strategy.horizon_steps. Without fixed_tsa the
// call sits on the slow grid and picks the supply temperature exhaustively;
// with it, only airflow is re-optimized (the fast grid). Airflow search is
// per-(step, room) coordinate descent over the grid, swept to convergence.
MpcPlan mpc_plan(const RoomState& state, const Forecast& forecast,
                 const BuildingPhysics& physics, const ControlStrategy& strategy,
                 double tau, std::optional<double> fixed_tsa = std::nullopt);

// Per-run dispatch with the state the strategies need between calls: the
// previous input (reactive hysteresis) and the supply temperature committed
// at the last hour boundary (two-timescale MPC).
class Controller {
 public:
  Controller(const ControlStrategy& strategy, const BuildingPhysics& physics,
             double tau);

  // forecast may be null for NoControl and Reactive; MPC requires one
  // covering at least one step (shorter horizons near the end of a run are
  // planned over what remains).
  ControlInput decide(const RoomState& state, const BitVector& occupancy_now,
                      double t_out, const Forecast* forecast, Timestamp now);

 private:
  ControlStrategy strategy_;
  BuildingPhysics physics_;
  double tau_;
  ControlInput previous_;
  bool has_previous_ = false;
  double committed_tsa_ = 0;
  bool has_committed_tsa_ = false;
};

}  // namespace zonesim
