#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "zonesim/analysis.hpp"
#include "zonesim/engine.hpp"
#include "zonesim/occupancy.hpp"

namespace zonesim {

struct SweepOptions {
  std::vector<double> error_levels;      // percent
  int replicates = 15;
  double energy_halfwidth = 20.0;        // kWh
  double discomfort_halfwidth = 5.0;     // percentage points
  int workers = 1;
};

struct ReplicateOutcome {
  int index = 0;
  std::uint64_t seed = 0;
  double energy_kwh = std::numeric_limits<double>::quiet_NaN();
  double discomfort_percent = std::numeric_limits<double>::quiet_NaN();
  double achieved_error = 0;   // percent, mean over rooms
  double final_tolerance = 0;  // widest band any room needed
  bool in_box = false;
  bool failed = false;
  std::string message;
};

struct LevelOutcome {
  double level = 0;    // requested percent
  double robust = 0;   // percent of replicates inside the box
  std::vector<ReplicateOutcome> replicates;
};

struct DayOutcome {
  Date day = 0;
  double baseline_energy = 0;
  double baseline_discomfort = 0;
  std::vector<LevelOutcome> levels;
};

struct SweepReport {
  SweepOptions options;
  std::vector<DayOutcome> days;
  ErrorMatrix matrix;  // pairwise errors over the whole occupancy database
};

// For every whole day in [start, stop) and every error level: one perfect-
// prediction baseline, then `replicates` seeded erroneous runs. Replicate
// seeds hash (rng_seed, day, level, index) so any cell reruns in isolation.
SweepReport run_error_sweep(const SimulationConfig& config,
                            const PreparedInputs& inputs,
                            const SweepOptions& options);

// Convenience overload that loads the config's data files first.
SweepReport run_error_sweep(const SimulationConfig& config,
                            const SweepOptions& options);

// Plot-ready scatter: one row per replicate plus one baseline row per day
// (replicate index -1). Rerunning the same seed reproduces the bytes.
void emit_scatter(const SweepReport& report, const std::filesystem::path& path);

}  // namespace zonesim
