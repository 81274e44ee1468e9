#include "zonesim/engine.hpp"

#include <algorithm>
#include <string>

#include "zonesim/analysis.hpp"
#include "zonesim/datetime.hpp"
#include "zonesim/error.hpp"
#include "zonesim/rng.hpp"

namespace zonesim {

namespace {

void require_aligned(const TimeSeries& series, const SimulationConfig& config,
                     const char* what) {
  const auto n_t = (config.stop - config.start) / config.time_step;
  if (series.start != config.start || series.step != config.time_step ||
      series.size() != n_t || series.has_missing()) {
    throw Error(Errc::window_outside_data,
                std::string(what) +
                    " series is not aligned to the simulation window");
  }
}

BitMatrix to_bits(const std::vector<TimeSeries>& rooms) {
  const auto steps = rooms.front().size();
  BitMatrix bits(steps, static_cast<Eigen::Index>(rooms.size()));
  for (std::size_t r = 0; r < rooms.size(); ++r) {
    for (Eigen::Index t = 0; t < steps; ++t) {
      bits(t, static_cast<Eigen::Index>(r)) = rooms[r].values[t] >= 0.5 ? 1 : 0;
    }
  }
  return bits;
}

}  // namespace

TimeSeries perturb_weather(const TimeSeries& weather, double percent,
                           std::uint64_t seed) {
  if (percent == 0.0) return weather;
  TimeSeries out = weather;
  SplitMix64 rng(seed);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double u = (2.0 * rng.next_unit() - 1.0) * percent / 100.0;
    out.values[i] = weather.values[i] * (1.0 + u);
  }
  return out;
}

SimulationResult simulate(const SimulationRun& run) {
  const SimulationConfig& config = run.config;
  const auto rooms = static_cast<Eigen::Index>(config.rooms);
  const auto n_t = (config.stop - config.start) / config.time_step;
  const double tau = static_cast<double>(config.time_step);

  require_aligned(run.weather, config, "weather");
  if (static_cast<int>(run.true_occupancy.size()) != config.rooms ||
      static_cast<int>(run.forecast_occupancy.size()) != config.rooms) {
    throw Error(Errc::length_mismatch,
                "occupancy series count does not match the room count");
  }
  for (const auto& s : run.true_occupancy) require_aligned(s, config, "occupancy");
  for (const auto& s : run.forecast_occupancy) {
    require_aligned(s, config, "forecast occupancy");
  }

  const BuildingPhysics physics = physics_from_config(config);
  const ControlStrategy strategy = strategy_from_config(config);

  const BitMatrix true_bits = to_bits(run.true_occupancy);
  const BitMatrix forecast_bits = to_bits(run.forecast_occupancy);
  // The controller plans against its own belief of the weather; realized
  // temperatures stay untouched.
  const TimeSeries forecast_weather =
      perturb_weather(run.weather, config.error.external_temperature,
                      hash_seed({config.rng_seed, 0x57454154u}));

  RoomState state;
  if (run.initial_state) {
    state = *run.initial_state;
  } else {
    const double t0 = config.initial_temperature.value_or(run.weather.values[0]);
    state.temperatures = Vector::Constant(rooms, t0);
  }
  if (state.rooms() != rooms) {
    throw Error(Errc::length_mismatch, "initial state has the wrong room count");
  }

  Controller controller(strategy, physics, tau);

  SimulationResult result;
  result.start = config.start;
  result.tau = tau;
  result.temperatures = Matrix(n_t, rooms);
  result.occupancy = BitMatrix(n_t, rooms);
  result.airflow = Matrix(n_t, rooms);
  result.supply_air_temperature = Vector(n_t);
  result.power = Vector(n_t);
  result.outside = Vector(n_t);

  const int horizon = strategy.horizon_steps;
  for (Eigen::Index t = 0; t < n_t; ++t) {
    Forecast forecast;
    const Forecast* forecast_ptr = nullptr;
    if (strategy.variant == ControlVariant::mpc) {
      const auto window = std::min<Eigen::Index>(horizon, n_t - t);
      forecast.outside = forecast_weather.values.segment(t, window);
      forecast.occupancy = forecast_bits.middleRows(t, window);
      forecast_ptr = &forecast;
    }
    const BitVector occupancy_now = true_bits.row(t).transpose();
    const Timestamp now = config.start + t * config.time_step;
    const ControlInput input =
        controller.decide(state, occupancy_now, run.weather.values[t],
                          forecast_ptr, now);

    result.temperatures.row(t) = state.temperatures.transpose();
    result.occupancy.row(t) = true_bits.row(t);
    result.airflow.row(t) = input.airflow.transpose();
    result.supply_air_temperature[t] = input.supply_air_temperature;
    result.power[t] = power(input, state, physics);
    result.outside[t] = run.weather.values[t];

    state = step(state, input, run.weather.values[t], occupancy_now, physics, tau);
  }
  return result;
}

PreparedInputs load_inputs(const SimulationConfig& config) {
  PreparedInputs inputs;

  const TimeSeries weather_raw = load_csv_series(config.files.weather);
  inputs.weather = preprocess(slice(weather_raw, config.start, config.stop),
                              config.time_step, SignalKind::continuous);

  const OccupancyData occupancy =
      load_occupancy_csv(config.files.occupancy, config.rooms);
  inputs.broadcast = occupancy.broadcast;
  for (const auto& room : occupancy.rooms) {
    inputs.occupancy.push_back(preprocess(slice(room, config.start, config.stop),
                                          config.time_step, SignalKind::binary));

    // Database span: every whole day the file covers, midnight to midnight.
    const TimeSeries full = preprocess(room, config.time_step, SignalKind::binary);
    const Timestamp first_midnight =
        start_of_day(date_of(full.start + kSecondsPerDay - 1));
    const Timestamp last_midnight = start_of_day(date_of(full.stop()));
    if (last_midnight <= first_midnight) {
      throw Error(Errc::partial_day,
                  "occupancy data covers no whole day: " + config.files.occupancy);
    }
    inputs.occupancy_database.push_back(
        slice(full, first_midnight, last_midnight));
  }
  return inputs;
}

SimulationRun make_run(const SimulationConfig& config,
                       const PreparedInputs& inputs, Timestamp start,
                       Timestamp stop,
                       const std::vector<TimeSeries>* forecast) {
  SimulationRun run;
  run.config = config;
  run.config.start = start;
  run.config.stop = stop;
  run.weather = slice(inputs.weather, start, stop);
  for (const auto& room : inputs.occupancy) {
    run.true_occupancy.push_back(slice(room, start, stop));
  }
  if (forecast) {
    for (const auto& room : *forecast) {
      run.forecast_occupancy.push_back(slice(room, start, stop));
    }
  } else {
    run.forecast_occupancy = run.true_occupancy;
  }
  return run;
}

}  // namespace zonesim
