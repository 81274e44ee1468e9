#include "zonesim/experiment.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "zonesim/datetime.hpp"
#include "zonesim/error.hpp"
#include "zonesim/rng.hpp"

namespace zonesim {

namespace {

void parallel_for(int jobs, int workers, const std::function<void(int)>& body) {
  if (workers <= 1 || jobs <= 1) {
    for (int i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int threads = std::min(workers, jobs);
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<Date> whole_days(Timestamp start, Timestamp stop) {
  std::vector<Date> days;
  Date d = date_of(start);
  if (start_of_day(d) < start) ++d;
  while (start_of_day(d) + kSecondsPerDay <= stop) days.push_back(d++);
  return days;
}

std::vector<OccupancyString> without_day(const std::vector<OccupancyString>& db,
                                         Date day) {
  std::vector<OccupancyString> out;
  out.reserve(db.size());
  for (const auto& s : db) {
    if (s.day != day) out.push_back(s);
  }
  return out;
}

TimeSeries series_of(const OccupancyString& s, std::int64_t step) {
  TimeSeries out;
  out.start = start_of_day(s.day);
  out.step = step;
  out.values = s.bits.cast<double>().matrix();
  return out;
}

struct DayContext {
  Date day;
  Timestamp begin, end;
  std::vector<OccupancyString> truth;                  // per room
  std::vector<std::vector<OccupancyString>> database;  // per room, day excluded
  std::vector<ErrorMatrix> matrix;                     // per room
};

}  // namespace

SweepReport run_error_sweep(const SimulationConfig& config,
                            const PreparedInputs& inputs,
                            const SweepOptions& options) {
  SweepReport report;
  report.options = options;

  const auto days = whole_days(config.start, config.stop);
  if (days.empty()) {
    throw Error(Errc::partial_day,
                "simulation window contains no whole day to sweep");
  }
  const int rooms = config.rooms;
  // Broadcast occupancy shares one zone-level string set; per-room files get
  // their own database and matrix.
  const int string_sets = inputs.broadcast ? 1 : rooms;

  std::vector<std::vector<OccupancyString>> full_db(string_sets);
  for (int r = 0; r < string_sets; ++r) {
    full_db[r] = to_day_strings(inputs.occupancy_database[r]);
  }
  if (full_db[0].size() >= 2) {
    report.matrix = build_error_matrix(full_db[0]);
  }

  std::vector<DayContext> contexts(days.size());
  for (std::size_t d = 0; d < days.size(); ++d) {
    DayContext& ctx = contexts[d];
    ctx.day = days[d];
    ctx.begin = start_of_day(days[d]);
    ctx.end = ctx.begin + kSecondsPerDay;
    for (int r = 0; r < string_sets; ++r) {
      const auto day_strings =
          to_day_strings(slice(inputs.occupancy[r], ctx.begin, ctx.end));
      ctx.truth.push_back(day_strings.front());
      ctx.database.push_back(without_day(full_db[r], days[d]));
      if (ctx.database.back().size() >= 2) {
        ctx.matrix.push_back(build_error_matrix(ctx.database.back()));
      } else {
        ctx.matrix.emplace_back();
      }
    }
  }

  // Baselines first: the acceptance box of every level centres on them.
  report.days.resize(days.size());
  parallel_for(static_cast<int>(days.size()), options.workers, [&](int d) {
    const DayContext& ctx = contexts[d];
    const SimulationRun run = make_run(config, inputs, ctx.begin, ctx.end);
    const AnalysisReport analysis = analyse(simulate(run), run.config);
    report.days[d].day = ctx.day;
    report.days[d].baseline_energy = analysis.energy_kwh;
    report.days[d].baseline_discomfort = analysis.mean_discomfort_percent;
  });

  const int n_levels = static_cast<int>(options.error_levels.size());
  for (auto& day : report.days) {
    day.levels.resize(n_levels);
    for (int l = 0; l < n_levels; ++l) {
      day.levels[l].level = options.error_levels[l];
      day.levels[l].replicates.resize(options.replicates);
    }
  }

  const int jobs = static_cast<int>(days.size()) * n_levels * options.replicates;
  parallel_for(jobs, options.workers, [&](int job) {
    const int k = job % options.replicates;
    const int l = (job / options.replicates) % n_levels;
    const int d = job / (options.replicates * n_levels);
    const DayContext& ctx = contexts[d];
    const double level = options.error_levels[l];

    ReplicateOutcome& outcome = report.days[d].levels[l].replicates[k];
    outcome.index = k;
    outcome.seed = hash_seed({config.rng_seed,
                              static_cast<std::uint64_t>(ctx.day),
                              std::bit_cast<std::uint64_t>(level),
                              static_cast<std::uint64_t>(k)});
    try {
      std::vector<TimeSeries> forecast(rooms);
      if (level == 0.0) {
        // Perfect prediction; the seeded machinery never enters.
        outcome.achieved_error = 0;
        outcome.final_tolerance = config.error.tolerance;
        for (int r = 0; r < rooms; ++r) {
          forecast[r] = series_of(ctx.truth[inputs.broadcast ? 0 : r],
                                  config.time_step);
        }
      } else {
        double achieved_sum = 0;
        double tolerance_max = 0;
        for (int set = 0; set < string_sets; ++set) {
          const std::uint64_t set_seed =
              inputs.broadcast
                  ? outcome.seed
                  : hash_seed({outcome.seed, static_cast<std::uint64_t>(set)});
          const OccupancyString& reference =
              select_reference(ctx.truth[set], ctx.database[set]);
          const ErrorPair pair =
              select_erroneous(reference, ctx.database[set], ctx.matrix[set],
                               level, config.error.tolerance, set_seed);
          achieved_sum += pair.achieved_error;
          tolerance_max = std::max(tolerance_max, pair.final_tolerance);
          TimeSeries erroneous = series_of(pair.erroneous, config.time_step);
          erroneous.start = ctx.begin;  // forecast for this day, whatever its source date
          if (inputs.broadcast) {
            for (int r = 0; r < rooms; ++r) forecast[r] = erroneous;
          } else {
            forecast[set] = erroneous;
          }
        }
        outcome.achieved_error = achieved_sum / string_sets;
        outcome.final_tolerance = tolerance_max;
      }

      const SimulationRun run =
          make_run(config, inputs, ctx.begin, ctx.end, &forecast);
      const AnalysisReport analysis = analyse(simulate(run), run.config);
      outcome.energy_kwh = analysis.energy_kwh;
      outcome.discomfort_percent = analysis.mean_discomfort_percent;
    } catch (const Error& e) {
      outcome.failed = true;
      outcome.message = e.what();
    }
  });

  for (auto& day : report.days) {
    const AcceptanceBox box{day.baseline_energy, day.baseline_discomfort,
                            options.energy_halfwidth,
                            options.discomfort_halfwidth};
    for (auto& level : day.levels) {
      int inside = 0;
      for (auto& replicate : level.replicates) {
        replicate.in_box =
            !replicate.failed &&
            box.contains(replicate.energy_kwh, replicate.discomfort_percent);
        if (replicate.in_box) ++inside;
      }
      level.robust = 100.0 * inside /
                     static_cast<double>(std::max<std::size_t>(
                         1, level.replicates.size()));
    }
  }
  return report;
}

SweepReport run_error_sweep(const SimulationConfig& config,
                            const SweepOptions& options) {
  return run_error_sweep(config, load_inputs(config), options);
}

void emit_scatter(const SweepReport& report, const std::filesystem::path& path) {
  if (report.days.empty()) {
    throw Error(Errc::write_failed, "sweep report is empty");
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::write_failed, "cannot write " + path.string());
  }
  out << "day,error_level,replicate,E_kwh,D_percent,achieved_error,in_box\n";
  char buf[128];
  for (const auto& day : report.days) {
    std::snprintf(buf, sizeof(buf), "%s,0,-1,%.6f,%.6f,0.000000,1\n",
                  format_date(day.day).c_str(), day.baseline_energy,
                  day.baseline_discomfort);
    out << buf;
    for (const auto& level : day.levels) {
      for (const auto& replicate : level.replicates) {
        std::snprintf(buf, sizeof(buf), "%s,%g,%d,%.6f,%.6f,%.6f,%d\n",
                      format_date(day.day).c_str(), level.level,
                      replicate.index, replicate.energy_kwh,
                      replicate.discomfort_percent, replicate.achieved_error,
                      replicate.in_box ? 1 : 0);
        out << buf;
      }
    }
  }
  if (!out) {
    throw Error(Errc::write_failed, "failed writing " + path.string());
  }
}

}  // namespace zonesim
