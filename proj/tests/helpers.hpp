#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zonesim/analysis.hpp"
#include "zonesim/config.hpp"
#include "zonesim/control.hpp"
#include "zonesim/datetime.hpp"
#include "zonesim/engine.hpp"
#include "zonesim/rng.hpp"
#include "zonesim/thermal.hpp"
#include "zonesim/timeseries.hpp"

namespace testutil {

using namespace zonesim;

inline TimeSeries make_series(Timestamp start, std::int64_t step,
                              std::vector<double> values) {
  TimeSeries s;
  s.start = start;
  s.step = step;
  s.values = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return s;
}

inline TimeSeries constant_series(Timestamp start, std::int64_t step,
                                  Eigen::Index n, double value) {
  TimeSeries s;
  s.start = start;
  s.step = step;
  s.values = Vector::Constant(n, value);
  return s;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path("test_scratch") / name;
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Exhaustive receding-horizon optimum: every supply temperature times every
// per-(step, room) airflow assignment, rolled forward step by step. This is
// the independent check on the coordinate-descent planner.
struct BruteForceResult {
  double objective = 0;
  double tsa = 0;
};

inline double rollout_objective(const RoomState& initial, const Forecast& forecast,
                                const BuildingPhysics& physics,
                                const ControlStrategy& strategy, double tau,
                                double tsa, const Matrix& plan) {
  const int horizon = strategy.horizon_steps;
  Vector temps = initial.temperatures;
  double objective = 0;
  for (int h = 0; h < horizon; ++h) {
    ControlInput input{tsa, plan.row(h).transpose()};
    const RoomState state{temps};
    double discomfort_sum = 0;
    for (Eigen::Index j = 0; j < temps.size(); ++j) {
      if (!forecast.occupancy(h, j)) continue;
      discomfort_sum += discomfort(pmv(temps[j], input.airflow[j], strategy.pmv),
                                   strategy.band);
    }
    // Per-step cost: energy plus lambda-weighted discomfort.
    objective += power(input, state, physics) * tau / 3600.0 +
                 strategy.mpc.lambda * discomfort_sum;
    const BitVector occ = forecast.occupancy.row(h).transpose();
    temps = step(state, input, forecast.outside[h], occ, physics, tau)
                .temperatures;
  }
  return objective;
}

inline BruteForceResult brute_force_mpc(const RoomState& initial,
                                        const Forecast& forecast,
                                        const BuildingPhysics& physics,
                                        const ControlStrategy& strategy,
                                        double tau) {
  const int horizon = strategy.horizon_steps;
  const auto rooms = initial.rooms();
  const auto& grid = strategy.mpc.airflow_grid;
  const auto cells = static_cast<std::size_t>(horizon) * static_cast<std::size_t>(rooms);

  BruteForceResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> digits(cells, 0);
  Matrix plan(horizon, rooms);
  for (double tsa : strategy.mpc.tsa_grid) {
    std::fill(digits.begin(), digits.end(), 0);
    while (true) {
      for (std::size_t c = 0; c < cells; ++c) {
        plan(static_cast<Eigen::Index>(c) / rooms,
             static_cast<Eigen::Index>(c) % rooms) = grid[digits[c]];
      }
      const double objective =
          rollout_objective(initial, forecast, physics, strategy, tau, tsa, plan);
      if (objective < best.objective) {
        best.objective = objective;
        best.tsa = tsa;
      }
      std::size_t c = 0;
      while (c < cells && ++digits[c] == grid.size()) digits[c++] = 0;
      if (c == cells) break;
    }
  }
  return best;
}

}  // namespace testutil
