#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "zonesim/analysis.hpp"
#include "zonesim/engine.hpp"
#include "zonesim/error.hpp"
#include "zonesim/report.hpp"

using namespace zonesim;

TEST_SUITE_BEGIN("report");

namespace {

SimulationRun tiny_run() {
  SimulationRun run;
  run.config.rooms = 2;
  run.config.start = parse_timestamp("20150706T0000");
  run.config.stop = parse_timestamp("20150707T0000");
  run.config.time_step = 600;
  run.config.control = ControlVariant::reactive;

  run.weather = testutil::constant_series(run.config.start, 600, 144, 0.0);
  for (int k = 0; k < 144; ++k) {
    run.weather.values[k] = 27.0 + 4.0 * std::sin(k * 2 * M_PI / 144.0);
  }
  TimeSeries occupancy = testutil::constant_series(run.config.start, 600, 144, 0.0);
  for (int k = 9 * 6; k < 17 * 6; ++k) occupancy.values[k] = 1.0;
  run.true_occupancy.assign(2, occupancy);
  run.forecast_occupancy = run.true_occupancy;
  return run;
}

}  // namespace

TEST_CASE("the steps file carries one row per step plus a header") {
  const SimulationRun run = tiny_run();
  const SimulationResult result = simulate(run);
  const AnalysisReport analysis = analyse(result, run.config);

  const auto dir = testutil::scratch_dir("report");
  const auto base = dir / "run";
  write_report(result, analysis, base);

  const std::string text = testutil::read_file(steps_path(base));
  int lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 145);  // header + 144 steps
  CHECK(text.rfind("timestamp,t_out,t_sa,power_kw", 0) == 0);
  CHECK(text.find("20150706T0000") != std::string::npos);
}

TEST_CASE("the summary is valid json with the aggregates") {
  const SimulationRun run = tiny_run();
  const SimulationResult result = simulate(run);
  const AnalysisReport analysis = analyse(result, run.config);

  const auto dir = testutil::scratch_dir("report");
  const auto base = dir / "summary_run";
  write_report(result, analysis, base);

  const auto parsed = nlohmann::json::parse(testutil::read_file(summary_path(base)));
  CHECK(parsed["steps"] == 144);
  CHECK(parsed["rooms"] == 2);
  CHECK(parsed["energy_kwh"].get<double>() ==
        doctest::Approx(analysis.energy_kwh).epsilon(1e-6));
  CHECK(parsed["discomfort_percent_per_room"].size() == 2);
  CHECK_FALSE(parsed.contains("robust"));
}

TEST_CASE("identical runs produce identical bytes") {
  const SimulationRun run = tiny_run();
  const auto dir = testutil::scratch_dir("report");

  const SimulationResult r1 = simulate(run);
  write_report(r1, analyse(r1, run.config), dir / "a");
  const SimulationResult r2 = simulate(run);
  write_report(r2, analyse(r2, run.config), dir / "b");

  CHECK(testutil::read_file(steps_path(dir / "a")) ==
        testutil::read_file(steps_path(dir / "b")));
  CHECK(testutil::read_file(summary_path(dir / "a")) ==
        testutil::read_file(summary_path(dir / "b")));
}

TEST_CASE("an unwritable path reports write_failed") {
  const SimulationRun run = tiny_run();
  const SimulationResult result = simulate(run);
  const AnalysisReport analysis = analyse(result, run.config);
  try {
    write_report(result, analysis, "/nonexistent_dir/deep/run");
    FAIL("expected write_failed");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::write_failed);
  }
}

TEST_SUITE_END();
