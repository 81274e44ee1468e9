#include "zonesim/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "zonesim/datetime.hpp"
#include "zonesim/error.hpp"

namespace zonesim {

namespace {

using nlohmann::json;

json round6(double v) {
  if (std::isnan(v)) return nullptr;
  // Fixed precision keeps summaries byte-stable and diff-friendly.
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return json::parse(buf);
}

}  // namespace

void write_report(const SimulationResult& result, const AnalysisReport& report,
                  const std::filesystem::path& base) {
  const auto csv = steps_path(base);
  std::ofstream steps(csv);
  if (!steps) {
    throw Error(Errc::write_failed, "cannot write " + csv.string());
  }

  const auto rooms = result.rooms();
  steps << "timestamp,t_out,t_sa,power_kw";
  for (Eigen::Index r = 0; r < rooms; ++r) {
    const auto label = std::to_string(r + 1);
    steps << ",temp_r" << label << ",occ_r" << label << ",airflow_r" << label
          << ",pmv_r" << label << ",discomfort_r" << label;
  }
  steps << "\n";

  char buf[64];
  for (Eigen::Index t = 0; t < result.steps(); ++t) {
    const Timestamp at = result.start + static_cast<Timestamp>(t * result.tau);
    steps << format_timestamp(at);
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f", result.outside[t],
                  result.supply_air_temperature[t], result.power[t]);
    steps << buf;
    for (Eigen::Index r = 0; r < rooms; ++r) {
      std::snprintf(buf, sizeof(buf), ",%.6f,%d,%.6f,%.6f,%.6f",
                    result.temperatures(t, r), result.occupancy(t, r),
                    result.airflow(t, r), report.pmv(t, r),
                    report.discomfort(t, r));
      steps << buf;
    }
    steps << "\n";
  }
  if (!steps) {
    throw Error(Errc::write_failed, "failed writing " + csv.string());
  }

  json summary;
  summary["start"] = format_timestamp(result.start);
  summary["time_step"] = static_cast<std::int64_t>(result.tau);
  summary["steps"] = result.steps();
  summary["rooms"] = rooms;
  summary["energy_kwh"] = round6(report.energy_kwh);
  summary["mean_discomfort_percent"] = round6(report.mean_discomfort_percent);
  json per_room = json::array();
  for (Eigen::Index r = 0; r < rooms; ++r) {
    per_room.push_back(round6(report.discomfort_percent[r]));
  }
  summary["discomfort_percent_per_room"] = per_room;
  if (!std::isnan(report.robust)) summary["robust"] = round6(report.robust);

  const auto js = summary_path(base);
  std::ofstream out(js);
  if (!out) {
    throw Error(Errc::write_failed, "cannot write " + js.string());
  }
  out << summary.dump(2) << "\n";
  if (!out) {
    throw Error(Errc::write_failed, "failed writing " + js.string());
  }
}

void write_sweep_summary(const SweepReport& report,
                         const std::filesystem::path& path) {
  json root;
  root["replicates"] = report.options.replicates;
  root["box"] = {{"energy_halfwidth", round6(report.options.energy_halfwidth)},
                 {"discomfort_halfwidth",
                  round6(report.options.discomfort_halfwidth)}};
  json days = json::array();
  for (const auto& day : report.days) {
    json jd;
    jd["day"] = format_date(day.day);
    jd["baseline"] = {{"energy_kwh", round6(day.baseline_energy)},
                      {"discomfort_percent", round6(day.baseline_discomfort)}};
    json levels = json::array();
    for (const auto& level : day.levels) {
      json jl;
      jl["level"] = level.level;
      jl["robust"] = round6(level.robust);
      json reps = json::array();
      for (const auto& r : level.replicates) {
        json jr;
        jr["replicate"] = r.index;
        jr["seed"] = r.seed;
        jr["energy_kwh"] = round6(r.energy_kwh);
        jr["discomfort_percent"] = round6(r.discomfort_percent);
        jr["achieved_error"] = round6(r.achieved_error);
        jr["in_box"] = r.in_box;
        if (r.failed) jr["error"] = r.message;
        reps.push_back(jr);
      }
      jl["replicates"] = reps;
      levels.push_back(jl);
    }
    jd["levels"] = levels;
    days.push_back(jd);
  }
  root["days"] = days;

  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::write_failed, "cannot write " + path.string());
  }
  out << root.dump(2) << "\n";
  if (!out) {
    throw Error(Errc::write_failed, "failed writing " + path.string());
  }
}

}  // namespace zonesim
