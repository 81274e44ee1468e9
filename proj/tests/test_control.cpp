#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "zonesim/analysis.hpp"
#include "zonesim/control.hpp"
#include "zonesim/error.hpp"

using namespace zonesim;
using testutil::brute_force_mpc;

TEST_SUITE_BEGIN("control");

namespace {

ControlStrategy small_strategy(int horizon_steps, ControlVariant variant) {
  ControlStrategy s;
  s.variant = variant;
  s.horizon_steps = horizon_steps;
  s.mpc.tsa_grid = {14, 35};
  s.mpc.airflow_grid = {0, 0.5};
  return s;
}

Forecast constant_forecast(int steps, int rooms, double t_out, int occupied) {
  Forecast f;
  f.outside = Vector::Constant(steps, t_out);
  f.occupancy = BitMatrix::Constant(steps, rooms, occupied);
  return f;
}

}  // namespace

TEST_CASE("no_control turns everything off") {
  RoomState state{Vector::Constant(3, 27.0)};
  const ControlInput input = no_control(state);
  CHECK(input.airflow.isZero(0));
  CHECK(input.supply_air_temperature == doctest::Approx(27.0));
  CHECK(power(input, state, BuildingPhysics{}) == 0.0);
}

TEST_CASE("reactive leaves unoccupied rooms alone") {
  BuildingPhysics physics;
  const ControlStrategy strategy = small_strategy(1, ControlVariant::reactive);
  RoomState hot{Vector::Constant(2, 32.0)};
  const ControlInput off = hvac_off(2, 32.0);
  const ControlInput input =
      reactive(hot, BitVector::Zero(2), 32.0, off, physics, strategy, 600);
  CHECK(input.airflow.isZero(0));
}

TEST_CASE("reactive cools an occupied hot room with the coldest supply air") {
  BuildingPhysics physics;
  ControlStrategy strategy = small_strategy(1, ControlVariant::reactive);
  strategy.mpc.tsa_grid = {12, 14, 16, 30, 35, 40};
  strategy.mpc.airflow_grid = {0, 0.1, 0.25, 0.5, 1.0};
  // PMV(30, 0) = 1.9512 > 0.5: cooling demand.
  RoomState state{Vector::Constant(1, 30.0)};
  const ControlInput off = hvac_off(1, 30.0);
  const ControlInput input = reactive(state, BitVector::Constant(1, 1), 30.0,
                                      off, physics, strategy, 600);
  CHECK(input.supply_air_temperature == 12.0);
  CHECK(input.airflow[0] > 0.0);
}

TEST_CASE("reactive rests while the comfort band holds") {
  BuildingPhysics physics;
  const ControlStrategy strategy = small_strategy(1, ControlVariant::reactive);
  // PMV(22.088, 0) ~ 0, inside [-0.5, 0.5].
  RoomState state{Vector::Constant(1, 22.0)};
  const ControlInput off = hvac_off(1, 22.0);
  const ControlInput input = reactive(state, BitVector::Constant(1, 1), 22.0,
                                      off, physics, strategy, 600);
  CHECK(input.airflow.isZero(0));
}

TEST_CASE("reactive holds airflow through the hysteresis region") {
  BuildingPhysics physics;
  ControlStrategy strategy = small_strategy(1, ControlVariant::reactive);
  strategy.reactive.deadband = 0.2;
  // Just under the upper band edge: a fresh controller stays off, but one
  // already cooling keeps its airflow until the PMV clears the deadband.
  const double t_edge = (0.5 - 0.05 + strategy.pmv.p4) / strategy.pmv.p1;
  RoomState state{Vector::Constant(1, t_edge)};
  const BitVector occupied = BitVector::Constant(1, 1);

  const ControlInput fresh = reactive(state, occupied, t_edge,
                                      hvac_off(1, t_edge), physics, strategy, 600);
  CHECK(fresh.airflow.isZero(0));

  ControlInput cooling{strategy.mpc.tsa_grid.front(), Vector::Constant(1, 0.5)};
  const ControlInput held =
      reactive(state, occupied, t_edge, cooling, physics, strategy, 600);
  CHECK(held.airflow[0] == 0.5);

  // Comfortably inside the shrunk band the hold releases.
  const double t_deep = (0.5 - 0.4 + strategy.pmv.p4) / strategy.pmv.p1;
  RoomState deep{Vector::Constant(1, t_deep)};
  const ControlInput released =
      reactive(deep, occupied, t_deep, cooling, physics, strategy, 600);
  CHECK(released.airflow.isZero(0));
}

TEST_CASE("reactive never actuates an unoccupied room") {
  SplitMix64 rng(77);
  BuildingPhysics physics;
  ControlStrategy strategy = small_strategy(1, ControlVariant::reactive);
  strategy.mpc.airflow_grid = {0, 0.25, 1.0};
  for (int iter = 0; iter < 200; ++iter) {
    const int rooms = 1 + static_cast<int>(rng.next_below(5));
    RoomState state{Vector(rooms)};
    BitVector occ(rooms);
    ControlInput prev;
    prev.supply_air_temperature = rng.next_below(2) ? 14.0 : 35.0;
    prev.airflow = Vector(rooms);
    for (int j = 0; j < rooms; ++j) {
      state.temperatures[j] = 12 + 25 * rng.next_unit();
      occ[j] = static_cast<int>(rng.next_below(2));
      prev.airflow[j] = rng.next_below(2) ? 0.25 : 0.0;
    }
    const ControlInput input = reactive(state, occ, 30.0, prev, physics,
                                        strategy, 600);
    for (int j = 0; j < rooms; ++j) {
      if (!occ[j]) CHECK(input.airflow[j] == 0.0);
      CHECK(input.airflow[j] >= 0.0);
      CHECK(input.airflow[j] <= strategy.mpc.airflow_grid.back());
    }
  }
}

TEST_CASE("mpc with an empty forecast plans nothing") {
  BuildingPhysics physics;
  const ControlStrategy strategy = small_strategy(3, ControlVariant::mpc);
  RoomState state{Vector::Constant(2, 30.0)};
  const Forecast forecast = constant_forecast(3, 2, 30.0, 0);
  const MpcPlan plan = mpc_plan(state, forecast, physics, strategy, 600);
  CHECK(plan.airflow.isZero(0));
  CHECK(plan.objective == 0.0);
}

TEST_CASE("a zero discomfort weight shuts the system down") {
  BuildingPhysics physics;
  ControlStrategy strategy = small_strategy(3, ControlVariant::mpc);
  strategy.mpc.lambda = 0.0;
  RoomState state{Vector::Constant(2, 32.0)};
  const Forecast forecast = constant_forecast(3, 2, 32.0, 1);
  const MpcPlan plan = mpc_plan(state, forecast, physics, strategy, 600);
  CHECK(plan.airflow.isZero(0));
  CHECK(plan.objective == 0.0);
}

TEST_CASE("a short forecast is infeasible") {
  BuildingPhysics physics;
  const ControlStrategy strategy = small_strategy(4, ControlVariant::mpc);
  RoomState state{Vector::Constant(1, 25.0)};
  const Forecast forecast = constant_forecast(2, 1, 25.0, 1);
  CHECK_THROWS_AS(mpc_plan(state, forecast, physics, strategy, 600), Error);
}

TEST_CASE("the single-room one-step plan matches enumerating all candidates") {
  BuildingPhysics physics;
  const ControlStrategy strategy = small_strategy(1, ControlVariant::mpc);
  RoomState state{Vector::Constant(1, 31.0)};
  const Forecast forecast = constant_forecast(1, 1, 31.0, 1);

  const MpcPlan plan = mpc_plan(state, forecast, physics, strategy, 600);
  const auto oracle = brute_force_mpc(state, forecast, physics, strategy, 600);
  CHECK(plan.objective == oracle.objective);
}

TEST_CASE("coordinate descent matches exhaustive search on small instances") {
  SplitMix64 rng(90210);
  int instances = 0;
  while (instances < 120) {
    const int rooms = 1 + static_cast<int>(rng.next_below(2));
    const int horizon = 1 + static_cast<int>(rng.next_below(2));
    ControlStrategy strategy = small_strategy(horizon, ControlVariant::mpc);
    strategy.mpc.lambda = 0.25 + 3 * rng.next_unit();
    strategy.mpc.tsa_grid = {10 + 4 * rng.next_unit(), 20 + 4 * rng.next_unit(),
                             32 + 6 * rng.next_unit()};
    strategy.mpc.airflow_grid = {0, 0.2 + 0.3 * rng.next_unit(),
                                 0.7 + 0.3 * rng.next_unit()};
    BuildingPhysics physics;
    physics.wall_coeff = 0.05 * rng.next_unit();

    RoomState state{Vector(rooms)};
    for (int j = 0; j < rooms; ++j) state.temperatures[j] = 16 + 18 * rng.next_unit();
    Forecast forecast;
    forecast.outside = Vector(horizon);
    forecast.occupancy = BitMatrix(horizon, rooms);
    for (int h = 0; h < horizon; ++h) {
      forecast.outside[h] = 10 + 25 * rng.next_unit();
      for (int j = 0; j < rooms; ++j) {
        forecast.occupancy(h, j) = static_cast<int>(rng.next_below(2));
      }
    }

    const MpcPlan plan = mpc_plan(state, forecast, physics, strategy, 600);
    const auto oracle = brute_force_mpc(state, forecast, physics, strategy, 600);
    CAPTURE(instances);
    CHECK(plan.objective == oracle.objective);
    ++instances;
  }
}

TEST_CASE("planned discomfort never rises with the weight") {
  BuildingPhysics physics;
  RoomState state{Vector::Constant(1, 30.0)};
  const Forecast forecast = constant_forecast(2, 1, 32.0, 1);

  double previous_discomfort = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.25, 1.0, 4.0, 16.0}) {
    ControlStrategy strategy = small_strategy(2, ControlVariant::mpc);
    strategy.mpc.tsa_grid = {12, 14, 35};
    strategy.mpc.airflow_grid = {0, 0.25, 1.0};
    strategy.mpc.lambda = lambda;
    const MpcPlan plan = mpc_plan(state, forecast, physics, strategy, 600);

    // Recount the discomfort term of the converged plan.
    Vector temps = state.temperatures;
    double total_discomfort = 0;
    for (int h = 0; h < 2; ++h) {
      ControlInput input{plan.supply_air_temperature,
                         plan.airflow.row(h).transpose()};
      for (Eigen::Index j = 0; j < temps.size(); ++j) {
        if (!forecast.occupancy(h, j)) continue;
        total_discomfort +=
            discomfort(pmv(temps[j], input.airflow[j], strategy.pmv), strategy.band);
      }
      temps = step(RoomState{temps}, input, forecast.outside[h],
                   BitVector(forecast.occupancy.row(h).transpose()), physics, 600)
                  .temperatures;
    }
    if (lambda > 0) CHECK(total_discomfort <= previous_discomfort + 1e-12);
    previous_discomfort = total_discomfort;
  }
}

TEST_CASE("planning is a pure function of state and forecast") {
  BuildingPhysics physics;
  ControlStrategy strategy = small_strategy(6, ControlVariant::mpc);
  strategy.mpc.tsa_grid = {14, 35};
  strategy.mpc.airflow_grid = {0, 0.25, 0.5};
  const Forecast forecast = constant_forecast(6, 2, 33.0, 1);

  // Same state, same forecast: consecutive calls return identical plans.
  RoomState state{Vector::Constant(2, 33.0)};
  const MpcPlan first = mpc_plan(state, forecast, physics, strategy, 600);
  const MpcPlan second = mpc_plan(state, forecast, physics, strategy, 600);
  CHECK(first.supply_air_temperature == second.supply_air_temperature);
  CHECK(first.objective == second.objective);
  CHECK(first.airflow == second.airflow);

  // Two closed-loop rollouts from the same start coincide bit for bit; the
  // discrete airflow grid may cycle, but the trajectory is reproducible.
  auto rollout = [&](RoomState s) {
    Matrix trace(40, 2);
    for (int i = 0; i < 40; ++i) {
      const MpcPlan plan = mpc_plan(s, forecast, physics, strategy, 600);
      trace.row(i) = plan.first_step.airflow.transpose();
      s = step(s, plan.first_step, 33.0, BitVector::Constant(2, 1), physics, 600);
    }
    return trace;
  };
  CHECK(rollout(state) == rollout(state));
}

TEST_CASE("the controller dispatches on the configured variant") {
  BuildingPhysics physics;
  RoomState state{Vector::Constant(1, 30.0)};
  const BitVector occupied = BitVector::Constant(1, 1);

  Controller off(small_strategy(2, ControlVariant::no_control), physics, 600);
  CHECK(off.decide(state, occupied, 30.0, nullptr, 0).airflow.isZero(0));

  Controller hot(small_strategy(2, ControlVariant::reactive), physics, 600);
  CHECK(hot.decide(state, occupied, 30.0, nullptr, 0).airflow[0] > 0);

  Controller planner(small_strategy(2, ControlVariant::mpc), physics, 600);
  const Forecast forecast = constant_forecast(2, 1, 30.0, 1);
  CHECK_NOTHROW(planner.decide(state, occupied, 30.0, &forecast, 0));
  CHECK_THROWS_AS(planner.decide(state, occupied, 30.0, nullptr, 600), Error);
}

TEST_SUITE_END();
