#pragma once

#include <limits>
#include <vector>

#include "zonesim/config.hpp"
#include "zonesim/result.hpp"
#include "zonesim/types.hpp"

namespace zonesim {

// Total energy over a power trace sampled every tau seconds, in kWh.
inline double energy(const Vector& power_kw, double tau) {
  return power_kw.sum() * tau / 3600.0;
}

// Linearized predicted mean vote in room temperature and fan speed.
inline double pmv(double t_oc, double v_a, const PmvCoefficients& c) {
  return c.p1 * t_oc - c.p2 * v_a + c.p3 * v_a * v_a - c.p4;
}

// Hinge exceedance of the comfort band; zero inside [pmv_lower, pmv_upper].
inline double discomfort(double pmv_value, double pmv_lower, double pmv_upper) {
  return std::max({0.0, pmv_lower - pmv_value, pmv_value - pmv_upper});
}

inline double discomfort(double pmv_value, const ComfortBand& band) {
  return discomfort(pmv_value, band.pmv_lower, band.pmv_upper);
}

// Share of discomfort instances normalized by occupied instances, percent.
// The numerator runs over every step unless occupied_only is set.
double discomfort_percent(const Vector& discomfort_series,
                          const BitVector& occupancy_series,
                          bool occupied_only = false);

struct AnalysisReport {
  double energy_kwh = 0;
  Matrix pmv;                  // steps x rooms
  Matrix discomfort;           // steps x rooms
  Vector discomfort_percent;   // per room; NaN for never-occupied rooms
  double mean_discomfort_percent = 0;  // over rooms that saw occupancy
  double robust = std::numeric_limits<double>::quiet_NaN();  // experiment-level
};

// Box of acceptable (energy, discomfort) deviations around the
// perfect-prediction baseline run.
struct AcceptanceBox {
  double baseline_energy = 0;       // kWh
  double baseline_discomfort = 0;   // percent
  double energy_halfwidth = 20.0;   // kWh
  double discomfort_halfwidth = 5.0;  // percentage points

  bool contains(double energy_kwh, double discomfort_pct) const {
    return std::abs(energy_kwh - baseline_energy) <= energy_halfwidth &&
           std::abs(discomfort_pct - baseline_discomfort) <= discomfort_halfwidth;
  }
};

// Share of replicates whose (E, mean discomfort) stays inside the box.
double robust(const std::vector<AnalysisReport>& replicates,
              const AcceptanceBox& box);

// Full per-run evaluation from the recorded series.
AnalysisReport analyse(const SimulationResult& result,
                       const SimulationConfig& config);

}  // namespace zonesim
