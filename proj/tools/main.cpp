#include <bit>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zonesim/analysis.hpp"
#include "zonesim/config.hpp"
#include "zonesim/datetime.hpp"
#include "zonesim/engine.hpp"
#include "zonesim/error.hpp"
#include "zonesim/experiment.hpp"
#include "zonesim/occupancy.hpp"
#include "zonesim/report.hpp"
#include "zonesim/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 64;

bool is_config_error(zonesim::Errc code) {
  switch (code) {
    case zonesim::Errc::missing_required_key:
    case zonesim::Errc::malformed_timestamp:
    case zonesim::Errc::out_of_range_value:
    case zonesim::Errc::file_unreadable:
    case zonesim::Errc::unparsable_row:
    case zonesim::Errc::duplicate_timestamp:
    case zonesim::Errc::window_outside_data:
    case zonesim::Errc::all_values_missing:
    case zonesim::Errc::partial_day:
      return true;
    default:
      return false;
  }
}

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int workers = 1;
};

zonesim::SimulationConfig load_and_check(const std::string& path,
                                         const CommonFlags& flags) {
  auto config = zonesim::load_config(path);
  if (flags.seed) config.rng_seed = *flags.seed;
  if (flags.out_dir) {
    const std::filesystem::path original = config.files.output;
    const auto name = original.empty() ? std::filesystem::path("run")
                                       : original.filename();
    config.files.output = (std::filesystem::path(*flags.out_dir) / name).string();
  }
  zonesim::validate_config(config);
  return config;
}

void ensure_output_dir(const zonesim::SimulationConfig& config) {
  const auto parent = std::filesystem::path(config.files.output).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
}

int run_validate(const std::string& config_path) {
  const auto config = load_and_check(config_path, {});
  std::cerr << "config ok: " << zonesim::format_timestamp(config.start)
            << " .. " << zonesim::format_timestamp(config.stop) << ", "
            << config.rooms << " rooms, control "
            << static_cast<int>(config.control) << "\n";
  return kExitOk;
}

int run_simulate(const std::string& config_path, const CommonFlags& flags) {
  const auto config = load_and_check(config_path, flags);
  if (config.files.output.empty()) {
    throw zonesim::Error(zonesim::Errc::missing_required_key,
                         "missing required key: files.output");
  }
  ensure_output_dir(config);
  const auto inputs = zonesim::load_inputs(config);

  // A single run over the whole window; each day's forecast comes from the
  // configured occupancy error level.
  std::vector<zonesim::TimeSeries> forecast = inputs.occupancy;
  if (config.error.occupancy > 0) {
    const int sets = inputs.broadcast ? 1 : config.rooms;
    std::vector<std::vector<zonesim::OccupancyString>> database(sets);
    for (int r = 0; r < sets; ++r) {
      database[r] = zonesim::to_day_strings(inputs.occupancy_database[r]);
    }
    for (int r = 0; r < config.rooms; ++r) {
      const int set = inputs.broadcast ? 0 : r;
      auto days = zonesim::to_day_strings(inputs.occupancy[set]);
      zonesim::Vector patched = inputs.occupancy[set].values;
      const auto per_day = zonesim::kSecondsPerDay / config.time_step;
      for (std::size_t d = 0; d < days.size(); ++d) {
        auto others = database[set];
        std::erase_if(others, [&](const zonesim::OccupancyString& s) {
          return s.day == days[d].day;
        });
        if (others.size() < 2) continue;
        const auto matrix = zonesim::build_error_matrix(others);
        const auto& reference = zonesim::select_reference(days[d], others);
        const auto seed = zonesim::hash_seed(
            {config.rng_seed, static_cast<std::uint64_t>(days[d].day),
             std::bit_cast<std::uint64_t>(config.error.occupancy),
             static_cast<std::uint64_t>(inputs.broadcast ? 0 : r)});
        const auto pair = zonesim::select_erroneous(
            reference, others, matrix, config.error.occupancy,
            config.error.tolerance, seed);
        patched.segment(static_cast<Eigen::Index>(d) * per_day, per_day) =
            pair.erroneous.bits.cast<double>().matrix();
      }
      forecast[r].values = patched;
    }
  }

  const auto run = zonesim::make_run(config, inputs, config.start, config.stop,
                                     &forecast);
  const auto result = zonesim::simulate(run);
  const auto analysis = zonesim::analyse(result, run.config);
  zonesim::write_report(result, analysis, config.files.output);
  std::cerr << "simulated " << result.steps() << " steps -> "
            << zonesim::steps_path(config.files.output).string() << "\n";
  return kExitOk;
}

int run_sweep(const std::string& config_path, const CommonFlags& flags,
              const std::vector<double>& levels) {
  const auto config = load_and_check(config_path, flags);
  if (config.files.output.empty()) {
    throw zonesim::Error(zonesim::Errc::missing_required_key,
                         "missing required key: files.output");
  }
  zonesim::SweepOptions options;
  options.error_levels =
      levels.empty() ? std::vector<double>{config.error.occupancy} : levels;
  options.replicates = config.replicates;
  options.workers = flags.workers;

  ensure_output_dir(config);
  const auto inputs = zonesim::load_inputs(config);
  const auto report = zonesim::run_error_sweep(config, inputs, options);

  const std::filesystem::path base = config.files.output;
  zonesim::emit_scatter(report, zonesim::scatter_path(base));
  zonesim::write_sweep_summary(report, zonesim::summary_path(base));
  if (!report.matrix.days.empty()) {
    zonesim::write_matrix_csv(report.matrix, zonesim::matrix_path(base));
  }

  for (const auto& level : report.days.front().levels) {
    double sum = 0;
    for (const auto& day : report.days) {
      for (const auto& l : day.levels) {
        if (l.level == level.level) sum += l.robust;
      }
    }
    std::cout << "robust @ " << level.level << "%: "
              << sum / static_cast<double>(report.days.size()) << "%\n";
  }
  std::cerr << "sweep written to " << zonesim::scatter_path(base).string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"building thermal simulator for occupancy-forecast error analysis"};
  app.require_subcommand(1);

  std::string config_path;
  CommonFlags flags;
  std::vector<double> levels;

  auto* validate = app.add_subcommand("validate", "parse and check a config");
  validate->add_option("config", config_path, "config file")->required();

  auto* simulate = app.add_subcommand("simulate", "run one simulation");
  simulate->add_option("config", config_path, "config file")->required();

  auto* sweep = app.add_subcommand("sweep", "run the occupancy-error sweep");
  sweep->add_option("config", config_path, "config file")->required();
  sweep->add_option("--errors", levels, "error levels, percent")
      ->delimiter(',');

  for (auto* cmd : {simulate, sweep}) {
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&flags](std::uint64_t v) { flags.seed = v; },
        "override rng_seed");
    cmd->add_option_function<std::string>(
        "--out", [&flags](const std::string& v) { flags.out_dir = v; },
        "directory for output files");
  }
  sweep->add_option("--workers", flags.workers, "parallel replicate workers")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(config_path);
    if (simulate->parsed()) return run_simulate(config_path, flags);
    if (sweep->parsed()) return run_sweep(config_path, flags, levels);
  } catch (const zonesim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
