#include "zonesim/analysis.hpp"

#include <cmath>

#include "zonesim/error.hpp"

namespace zonesim {

double discomfort_percent(const Vector& discomfort_series,
                          const BitVector& occupancy_series,
                          bool occupied_only) {
  if (discomfort_series.size() != occupancy_series.size()) {
    throw Error(Errc::length_mismatch,
                "discomfort and occupancy series differ in length");
  }
  const auto occupied = occupancy_series.count();
  if (occupied == 0) {
    throw Error(Errc::never_occupied,
                "room is never occupied; discomfort share is undefined");
  }
  Eigen::Index uncomfortable = 0;
  for (Eigen::Index t = 0; t < discomfort_series.size(); ++t) {
    if (occupied_only && !occupancy_series[t]) continue;
    if (discomfort_series[t] != 0.0) ++uncomfortable;
  }
  return 100.0 * static_cast<double>(uncomfortable) /
         static_cast<double>(occupied);
}

double robust(const std::vector<AnalysisReport>& replicates,
              const AcceptanceBox& box) {
  if (replicates.empty()) return 100.0;
  int inside = 0;
  for (const auto& r : replicates) {
    if (box.contains(r.energy_kwh, r.mean_discomfort_percent)) ++inside;
  }
  return 100.0 * inside / static_cast<double>(replicates.size());
}

AnalysisReport analyse(const SimulationResult& result,
                       const SimulationConfig& config) {
  const auto steps = result.steps();
  const auto rooms = result.rooms();
  AnalysisReport report;
  report.energy_kwh = energy(result.power, result.tau);
  report.pmv = Matrix(steps, rooms);
  report.discomfort = Matrix(steps, rooms);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (Eigen::Index j = 0; j < rooms; ++j) {
      const double p =
          pmv(result.temperatures(t, j), result.airflow(t, j), config.pmv);
      report.pmv(t, j) = p;
      report.discomfort(t, j) = discomfort(p, config.comfort);
    }
  }
  report.discomfort_percent = Vector(rooms);
  double sum = 0;
  int occupied_rooms = 0;
  for (Eigen::Index j = 0; j < rooms; ++j) {
    const BitVector occ = result.occupancy.col(j);
    if (occ.count() == 0) {
      report.discomfort_percent[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double pct = discomfort_percent(report.discomfort.col(j), occ);
    report.discomfort_percent[j] = pct;
    sum += pct;
    ++occupied_rooms;
  }
  report.mean_discomfort_percent = occupied_rooms ? sum / occupied_rooms : 0.0;
  return report;
}

}  // namespace zonesim
