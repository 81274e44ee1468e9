#pragma once

#include <filesystem>

#include "zonesim/analysis.hpp"
#include "zonesim/experiment.hpp"
#include "zonesim/result.hpp"

namespace zonesim {

inline std::filesystem::path steps_path(const std::filesystem::path& base) {
  auto p = base;
  p += ".steps.csv";
  return p;
}

inline std::filesystem::path summary_path(const std::filesystem::path& base) {
  auto p = base;
  p += ".summary.json";
  return p;
}

inline std::filesystem::path scatter_path(const std::filesystem::path& base) {
  auto p = base;
  p += ".scatter.csv";
  return p;
}

inline std::filesystem::path matrix_path(const std::filesystem::path& base) {
  auto p = base;
  p += ".matrix.csv";
  return p;
}

// <base>.steps.csv with one row per step and <base>.summary.json with the
// aggregates. Byte-stable for identical inputs and seed.
void write_report(const SimulationResult& result, const AnalysisReport& report,
                  const std::filesystem::path& base);

// Sweep aggregates: per day the baseline, per level the robust share and
// each replicate's (E, D, achieved error, in_box, seed).
void write_sweep_summary(const SweepReport& report,
                         const std::filesystem::path& path);

}  // namespace zonesim
