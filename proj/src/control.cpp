#include "zonesim/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zonesim/analysis.hpp"
#include "zonesim/error.hpp"

namespace zonesim {

ControlStrategy strategy_from_config(const SimulationConfig& c) {
  ControlStrategy s;
  s.variant = c.control;
  s.reactive = c.reactive;
  s.mpc = c.mpc;
  s.horizon_steps = static_cast<int>(c.horizon_hours * 3600 / c.time_step);
  s.band = c.comfort;
  s.pmv = c.pmv;
  return s;
}

ControlInput no_control(const RoomState& state) {
  return hvac_off(state.rooms(), state.temperatures.mean());
}

namespace {

enum class Demand { off, hold, cool, heat };

}  // namespace

ControlInput reactive(const RoomState& state, const BitVector& occupancy_now,
                      double t_out, const ControlInput& previous,
                      const BuildingPhysics& physics,
                      const ControlStrategy& strategy, double tau) {
  const Eigen::Index n = state.rooms();
  const double t_return = state.temperatures.mean();
  const double tsa_cool = strategy.mpc.tsa_grid.front();
  const double tsa_heat = strategy.mpc.tsa_grid.back();
  const double deadband = strategy.reactive.deadband;
  const bool prev_cooling = previous.supply_air_temperature <= t_return;

  std::vector<Demand> demand(n, Demand::off);
  int cooling_rooms = 0;
  int heating_rooms = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!occupancy_now[j]) continue;
    const double p = pmv(state.temperatures[j], 0.0, strategy.pmv);
    if (p > strategy.band.pmv_upper) {
      demand[j] = Demand::cool;
      ++cooling_rooms;
    } else if (p < strategy.band.pmv_lower) {
      demand[j] = Demand::heat;
      ++heating_rooms;
    } else if (previous.airflow.size() == n && previous.airflow[j] > 0) {
      // Inside the band but not yet comfortably so: keep conditioning until
      // the PMV clears the deadband.
      const bool still_hot = prev_cooling && p > strategy.band.pmv_upper - deadband;
      const bool still_cold = !prev_cooling && p < strategy.band.pmv_lower + deadband;
      if (still_hot || still_cold) demand[j] = Demand::hold;
    }
  }

  if (cooling_rooms == 0 && heating_rooms == 0) {
    bool any_hold = std::any_of(demand.begin(), demand.end(),
                                [](Demand d) { return d == Demand::hold; });
    if (!any_hold) return hvac_off(n, t_return);
  }

  bool zone_cooling;
  if (cooling_rooms == 0 && heating_rooms == 0) {
    zone_cooling = prev_cooling;  // only holders left, keep the direction
  } else {
    zone_cooling = cooling_rooms >= heating_rooms;
  }
  const double tsa = zone_cooling ? tsa_cool : tsa_heat;

  ControlInput input;
  input.supply_air_temperature = tsa;
  input.airflow = Vector::Zero(n);
  Vector trial_flow = Vector::Zero(n);
  Vector next(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (demand[j] == Demand::off) continue;
    if (demand[j] == Demand::hold) {
      const bool compatible = prev_cooling == zone_cooling;
      if (compatible) input.airflow[j] = previous.airflow[j];
      continue;
    }
    const bool wants_cooling = demand[j] == Demand::cool;
    if (wants_cooling != zone_cooling) continue;  // single AHU, one direction

    // Smallest grid airflow whose one-step prediction lands the PMV back in
    // the band; the one-step update of room j only reads the other rooms'
    // current temperatures, so rooms can be sized independently.
    double chosen = strategy.mpc.airflow_grid.back();
    for (double v : strategy.mpc.airflow_grid) {
      if (v <= 0) continue;
      trial_flow[j] = v;
      euler_step_into(state.temperatures, tsa, trial_flow, t_out, occupancy_now,
                      physics, tau, next);
      trial_flow[j] = 0;
      const double predicted = pmv(next[j], v, strategy.pmv);
      const bool ok = wants_cooling ? predicted <= strategy.band.pmv_upper
                                    : predicted >= strategy.band.pmv_lower;
      if (ok) {
        chosen = v;
        break;
      }
    }
    input.airflow[j] = chosen;
  }
  return input;
}

namespace {

// Forward simulation of one candidate plan with suffix re-evaluation. A
// coordinate change at step h leaves everything before h untouched, so the
// descent only pays for the tail it actually perturbs.
class HorizonRollout {
 public:
  HorizonRollout(const RoomState& state, const Forecast& forecast,
                 const BuildingPhysics& physics, const ControlStrategy& strategy,
                 double tau, int horizon)
      : forecast_(forecast),
        physics_(physics),
        strategy_(strategy),
        tau_(tau),
        horizon_(horizon),
        rooms_(state.rooms()),
        states_(horizon + 1, state.rooms()),
        step_cost_(horizon),
        step_energy_(horizon),
        prefix_cost_(horizon + 1),
        scratch_(state.rooms()),
        scratch_next_(state.rooms()),
        row_(state.rooms()) {
    states_.row(0) = state.temperatures.transpose();
    prefix_cost_[0] = 0;
  }

  // Full recompute for the committed plan; returns its objective.
  double commit(const Matrix& plan, double tsa) {
    tsa_ = tsa;
    plan_ = plan;
    recompute_from(0);
    return prefix_cost_[horizon_];
  }

  // Objective if plan(h, j) were value, leaving the committed plan alone.
  double probe(int h, Eigen::Index j, double value) {
    scratch_ = states_.row(h).transpose();
    double cost = prefix_cost_[h];
    for (int i = h; i < horizon_; ++i) {
      row_ = plan_.row(i).transpose();
      if (i == h) row_[j] = value;
      cost += cost_of(scratch_, row_, i, false);
      euler_step_into(scratch_, tsa_, row_, forecast_.outside[i],
                      forecast_.occupancy.row(i).transpose(), physics_, tau_, scratch_next_);
      scratch_.swap(scratch_next_);
    }
    return cost;
  }

  void accept(int h, Eigen::Index j, double value) {
    plan_(h, j) = value;
    recompute_from(h);
  }

  double objective() const { return prefix_cost_[horizon_]; }
  double energy_kwh() const { return step_energy_.sum(); }
  const Matrix& plan() const { return plan_; }

 private:
  // record guards the per-step energy bookkeeping: probes must not leak
  // rejected candidates into the committed plan's energy total.
  double cost_of(const Vector& temps, const Vector& airflow, int h, bool record) {
    const double t_return = temps.mean();
    const double p_kw = power_value(tsa_, airflow, t_return, physics_);
    double discomfort_sum = 0;
    for (Eigen::Index j = 0; j < rooms_; ++j) {
      if (!forecast_.occupancy(h, j)) continue;
      discomfort_sum += discomfort(pmv(temps[j], airflow[j], strategy_.pmv),
                                   strategy_.band);
    }
    const double energy_kwh = p_kw * tau_ / 3600.0;
    if (record) step_energy_[h] = energy_kwh;
    return energy_kwh + strategy_.mpc.lambda * discomfort_sum;
  }

  void recompute_from(int h) {
    for (int i = h; i < horizon_; ++i) {
      scratch_ = states_.row(i).transpose();
      row_ = plan_.row(i).transpose();
      step_cost_[i] = cost_of(scratch_, row_, i, true);
      euler_step_into(scratch_, tsa_, row_, forecast_.outside[i],
                      forecast_.occupancy.row(i).transpose(), physics_, tau_, scratch_next_);
      states_.row(i + 1) = scratch_next_.transpose();
    }
    for (int i = h; i < horizon_; ++i) prefix_cost_[i + 1] = prefix_cost_[i] + step_cost_[i];
  }

  const Forecast& forecast_;
  const BuildingPhysics& physics_;
  const ControlStrategy& strategy_;
  double tau_;
  int horizon_;
  Eigen::Index rooms_;
  double tsa_ = 0;
  Matrix plan_;
  Matrix states_;
  Vector step_cost_;
  Vector step_energy_;
  Vector prefix_cost_;
  Vector scratch_;
  Vector scratch_next_;
  Vector row_;
};

constexpr int kMaxSweeps = 10;

// Coordinate descent to convergence; strict improvement keeps the incumbent
// on ties, which together with the ascending grid order makes low airflow
// the deterministic tie-break.
double optimize_airflow(HorizonRollout& rollout, const Matrix& start,
                        double tsa, const std::vector<double>& grid,
                        int horizon, Eigen::Index rooms) {
  double best = rollout.commit(start, tsa);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool improved = false;
    for (int h = 0; h < horizon; ++h) {
      for (Eigen::Index j = 0; j < rooms; ++j) {
        const double current = rollout.plan()(h, j);
        double best_value = current;
        for (double v : grid) {
          if (v == current) continue;
          const double candidate = rollout.probe(h, j, v);
          if (candidate < best) {
            best = candidate;
            best_value = v;
          }
        }
        if (best_value != current) {
          rollout.accept(h, j, best_value);
          // The committed objective is the canonical left-to-right sum; the
          // probe's prefix+suffix association can differ in the last bits.
          best = rollout.objective();
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace

MpcPlan mpc_plan(const RoomState& state, const Forecast& forecast,
                 const BuildingPhysics& physics, const ControlStrategy& strategy,
                 double tau, std::optional<double> fixed_tsa) {
  const int horizon = strategy.horizon_steps;
  if (forecast.steps() < horizon || forecast.occupancy.rows() < horizon) {
    throw Error(Errc::infeasible_forecast,
                "forecast covers " + std::to_string(forecast.steps()) +
                    " steps, horizon needs " + std::to_string(horizon));
  }
  const Eigen::Index rooms = state.rooms();
  const Matrix zero_plan = Matrix::Zero(horizon, rooms);

  HorizonRollout rollout(state, forecast, physics, strategy, tau, horizon);
  double best_objective = std::numeric_limits<double>::infinity();
  double best_energy = std::numeric_limits<double>::infinity();
  double best_tsa = 0;
  Matrix best_plan;

  std::vector<double> tsa_candidates;
  if (fixed_tsa) {
    tsa_candidates.push_back(*fixed_tsa);
  } else {
    tsa_candidates = strategy.mpc.tsa_grid;
  }
  for (double tsa : tsa_candidates) {
    const double objective = optimize_airflow(rollout, zero_plan, tsa,
                                              strategy.mpc.airflow_grid,
                                              horizon, rooms);
    const double energy = rollout.energy_kwh();
    const bool better =
        objective < best_objective ||
        (objective == best_objective &&
         (energy < best_energy || (energy == best_energy && tsa < best_tsa)));
    if (better) {
      best_objective = objective;
      best_energy = energy;
      best_tsa = tsa;
      best_plan = rollout.plan();
    }
  }

  MpcPlan plan;
  plan.objective = best_objective;
  plan.supply_air_temperature = best_tsa;
  plan.airflow = best_plan;
  plan.first_step.supply_air_temperature = best_tsa;
  plan.first_step.airflow = best_plan.row(0).transpose();
  return plan;
}

Controller::Controller(const ControlStrategy& strategy,
                       const BuildingPhysics& physics, double tau)
    : strategy_(strategy), physics_(physics), tau_(tau) {}

ControlInput Controller::decide(const RoomState& state,
                                const BitVector& occupancy_now, double t_out,
                                const Forecast* forecast, Timestamp now) {
  ControlInput input;
  switch (strategy_.variant) {
    case ControlVariant::no_control:
      input = no_control(state);
      break;
    case ControlVariant::reactive: {
      const ControlInput& prev =
          has_previous_ ? previous_ : hvac_off(state.rooms(), t_out);
      input = reactive(state, occupancy_now, t_out, prev, physics_, strategy_,
                       tau_);
      break;
    }
    case ControlVariant::mpc: {
      if (forecast == nullptr || forecast->steps() < 1) {
        throw Error(Errc::infeasible_forecast, "MPC needs a forecast");
      }
      // The horizon recedes into the end of the run; plan over what is left.
      ControlStrategy local = strategy_;
      local.horizon_steps = static_cast<int>(
          std::min<Eigen::Index>(strategy_.horizon_steps, forecast->steps()));
      const bool slow_grid = !has_committed_tsa_ || now % 3600 == 0;
      const auto plan =
          slow_grid ? mpc_plan(state, *forecast, physics_, local, tau_)
                    : mpc_plan(state, *forecast, physics_, local, tau_,
                               committed_tsa_);
      committed_tsa_ = plan.supply_air_temperature;
      has_committed_tsa_ = true;
      input = plan.first_step;
      break;
    }
  }
  previous_ = input;
  has_previous_ = true;
  return input;
}

}  // namespace zonesim
