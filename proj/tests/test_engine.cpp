#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "zonesim/analysis.hpp"
#include "zonesim/engine.hpp"
#include "zonesim/error.hpp"

using namespace zonesim;

TEST_SUITE_BEGIN("engine");

namespace {

// One day, three rooms, office-hours occupancy, warm afternoon weather.
SimulationConfig day_config(ControlVariant control) {
  SimulationConfig c;
  c.rooms = 3;
  c.start = parse_timestamp("20150706T0000");
  c.stop = parse_timestamp("20150707T0000");
  c.time_step = 600;
  c.control = control;
  c.horizon_hours = 2;
  c.mpc.tsa_grid = {14, 35};
  c.mpc.airflow_grid = {0, 0.25, 0.5};
  return c;
}

TimeSeries office_occupancy(Timestamp start) {
  TimeSeries s = testutil::constant_series(start, 600, 144, 0.0);
  for (int k = 8 * 6; k < 18 * 6; ++k) s.values[k] = 1.0;  // 08:00-18:00
  return s;
}

TimeSeries warm_weather(Timestamp start) {
  TimeSeries s = testutil::constant_series(start, 600, 144, 0.0);
  for (int k = 0; k < 144; ++k) {
    s.values[k] = 28.0 + 5.0 * std::sin((k - 48) * 2 * M_PI / 144.0);
  }
  return s;
}

SimulationRun office_run(ControlVariant control) {
  SimulationRun run;
  run.config = day_config(control);
  run.weather = warm_weather(run.config.start);
  run.true_occupancy.assign(3, office_occupancy(run.config.start));
  run.forecast_occupancy = run.true_occupancy;
  return run;
}

}  // namespace

TEST_CASE("equilibrium with no control and no occupants stays put") {
  SimulationRun run = office_run(ControlVariant::no_control);
  run.weather = testutil::constant_series(run.config.start, 600, 144, 24.0);
  run.true_occupancy.assign(3, testutil::constant_series(run.config.start, 600, 144, 0.0));
  run.forecast_occupancy = run.true_occupancy;

  const SimulationResult result = simulate(run);
  CHECK(result.steps() == 144);
  CHECK((result.temperatures.array() == 24.0).all());
  CHECK(energy(result.power, result.tau) == 0.0);
}

TEST_CASE("temperatures relax toward the outside under no control") {
  SimulationRun run = office_run(ControlVariant::no_control);
  run.weather = testutil::constant_series(run.config.start, 600, 144, 30.0);
  run.initial_state = RoomState{Vector::Constant(3, 20.0)};
  run.true_occupancy.assign(3, testutil::constant_series(run.config.start, 600, 144, 0.0));
  run.forecast_occupancy = run.true_occupancy;

  const SimulationResult result = simulate(run);
  const double first_gap = 30.0 - result.temperatures(0, 0);
  const double last_gap = 30.0 - result.temperatures(143, 0);
  CHECK(last_gap < first_gap);
  CHECK(last_gap > 0.0);
}

TEST_CASE("simulation is deterministic for a fixed config and seed") {
  for (auto control : {ControlVariant::no_control, ControlVariant::reactive,
                       ControlVariant::mpc}) {
    const SimulationRun run = office_run(control);
    const SimulationResult a = simulate(run);
    const SimulationResult b = simulate(run);
    CHECK(a.temperatures == b.temperatures);
    CHECK(a.power == b.power);
    CHECK(a.airflow == b.airflow);
  }
}

TEST_CASE("reactive control spends energy to pull PMV toward the band") {
  const SimulationResult idle = simulate(office_run(ControlVariant::no_control));
  const SimulationResult managed = simulate(office_run(ControlVariant::reactive));
  const SimulationConfig config = day_config(ControlVariant::reactive);

  CHECK(energy(idle.power, idle.tau) == 0.0);
  CHECK(energy(managed.power, managed.tau) > 0.0);

  const Eigen::Index last_occupied = 18 * 6 - 1;
  const double idle_pmv = pmv(idle.temperatures(last_occupied, 0),
                              idle.airflow(last_occupied, 0), config.pmv);
  const double managed_pmv = pmv(managed.temperatures(last_occupied, 0),
                                 managed.airflow(last_occupied, 0), config.pmv);
  const double idle_excess = discomfort(idle_pmv, config.comfort);
  const double managed_excess = discomfort(managed_pmv, config.comfort);
  CHECK(managed_excess < idle_excess);
}

TEST_CASE("replaying the recorded inputs reproduces the temperatures") {
  const SimulationRun run = office_run(ControlVariant::reactive);
  const SimulationResult result = simulate(run);
  const BuildingPhysics physics = physics_from_config(run.config);

  RoomState state{result.temperatures.row(0).transpose()};
  for (Eigen::Index t = 0; t < result.steps(); ++t) {
    CHECK(state.temperatures == result.temperatures.row(t).transpose());
    const ControlInput input{result.supply_air_temperature[t],
                             result.airflow.row(t).transpose()};
    state = step(state, input, result.outside[t],
                 BitVector(result.occupancy.row(t).transpose()), physics,
                 result.tau);
  }
}

TEST_CASE("discrete heat bookkeeping closes with HVAC off and no loads") {
  SimulationRun run = office_run(ControlVariant::no_control);
  run.config.room.equipment_load = 0;
  run.config.room.occupant_load = 0;
  run.initial_state = RoomState{Vector::Constant(3, 18.0)};

  const SimulationResult result = simulate(run);
  const BuildingPhysics physics = physics_from_config(run.config);
  const auto n = result.steps();

  // Final state is one step beyond the last recorded row.
  RoomState final_state{result.temperatures.row(n - 1).transpose()};
  final_state = step(final_state,
                     ControlInput{result.supply_air_temperature[n - 1],
                                  result.airflow.row(n - 1).transpose()},
                     result.outside[n - 1],
                     BitVector(result.occupancy.row(n - 1).transpose()), physics,
                     result.tau);

  double flows = 0;  // kW summed over rooms and steps
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      double flow = physics.outside_coeff *
                    (result.outside[t] - result.temperatures(t, j));
      if (j > 0) {
        flow += physics.wall_coeff *
                (result.temperatures(t, j - 1) - result.temperatures(t, j));
      }
      if (j + 1 < 3) {
        flow += physics.wall_coeff *
                (result.temperatures(t, j + 1) - result.temperatures(t, j));
      }
      flows += flow;
    }
  }
  const double stored =
      physics.thermal_capacity *
      (final_state.temperatures.sum() - result.temperatures.row(0).sum());
  CHECK(stored == doctest::Approx(result.tau * flows).epsilon(1e-6));
}

TEST_CASE("the controller sees the forecast, the rooms feel the truth") {
  // Truth: occupied afternoon. Forecast: empty day. MPC trusts the forecast
  // and leaves the HVAC off; the realized comfort accounting still runs on
  // the true bits.
  SimulationRun run = office_run(ControlVariant::mpc);
  run.forecast_occupancy.assign(
      3, testutil::constant_series(run.config.start, 600, 144, 0.0));

  const SimulationResult result = simulate(run);
  CHECK(energy(result.power, result.tau) == 0.0);

  const AnalysisReport report = analyse(result, run.config);
  CHECK(report.mean_discomfort_percent > 0.0);

  // The occupant load still heated the rooms: the afternoon runs warmer
  // than the same day with a truly empty building.
  SimulationRun empty = run;
  empty.true_occupancy = run.forecast_occupancy;
  const SimulationResult empty_result = simulate(empty);
  CHECK(result.temperatures(120, 1) > empty_result.temperatures(120, 1));
}

TEST_CASE("perturb_weather is bounded, seeded and optional") {
  const TimeSeries weather = warm_weather(0);
  const TimeSeries same = perturb_weather(weather, 0, 99);
  CHECK(same.values == weather.values);

  const TimeSeries a = perturb_weather(weather, 10, 1234);
  const TimeSeries b = perturb_weather(weather, 10, 1234);
  const TimeSeries c = perturb_weather(weather, 10, 4321);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  for (Eigen::Index i = 0; i < weather.size(); ++i) {
    CHECK(std::abs(a.values[i] - weather.values[i]) <=
          std::abs(weather.values[i]) * 0.1 + 1e-12);
  }
}

TEST_CASE("weather error perturbs only the controller's forecast") {
  // NoControl never reads the forecast, so a huge weather error changes
  // nothing; the recorded outside temperatures stay the truth either way.
  SimulationRun idle = office_run(ControlVariant::no_control);
  idle.config.error.external_temperature = 50;
  const SimulationResult noisy_idle = simulate(idle);
  idle.config.error.external_temperature = 0;
  const SimulationResult clean_idle = simulate(idle);
  CHECK(noisy_idle.temperatures == clean_idle.temperatures);
  CHECK(noisy_idle.outside == clean_idle.outside);

  // MPC plans against the believed weather, so its actions shift.
  SimulationRun planned = office_run(ControlVariant::mpc);
  planned.config.error.external_temperature = 40;
  const SimulationResult noisy = simulate(planned);
  planned.config.error.external_temperature = 0;
  const SimulationResult clean = simulate(planned);
  CHECK(noisy.outside == clean.outside);
  CHECK(noisy.airflow != clean.airflow);
}

TEST_CASE("misaligned series are rejected") {
  SimulationRun run = office_run(ControlVariant::no_control);
  run.weather.step = 300;  // wrong grid
  CHECK_THROWS_AS(simulate(run), Error);

  run = office_run(ControlVariant::no_control);
  run.true_occupancy.pop_back();  // wrong room count
  CHECK_THROWS_AS(simulate(run), Error);
}

TEST_SUITE_END();
