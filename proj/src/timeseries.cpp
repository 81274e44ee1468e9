#include "zonesim/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "zonesim/datetime.hpp"
#include "zonesim/error.hpp"

namespace zonesim {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(pos)));
      break;
    }
    fields.push_back(trim(line.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return fields;
}

[[noreturn]] void bad_row(const std::filesystem::path& path, int row) {
  throw Error(Errc::unparsable_row, "unparsable row " + std::to_string(row) +
                                        " in " + path.string());
}

struct RawSample {
  Timestamp t;
  double v;
};

std::vector<RawSample> read_rows(const std::filesystem::path& path,
                                 const CsvColumn& column) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_unreadable, "cannot open " + path.string());
  }
  std::vector<RawSample> rows;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto fields = split_fields(stripped);
    if (static_cast<int>(fields.size()) <= column.value_field) bad_row(path, row);
    if (column.zone_room) {
      if (fields.size() < 4) bad_row(path, row);
      try {
        const int zone = std::stoi(fields[1]);
        const int room = std::stoi(fields[2]);
        if (zone != column.zone_room->first || room != column.zone_room->second)
          continue;
      } catch (const std::exception&) {
        bad_row(path, row);
      }
    }
    Timestamp t;
    double v;
    try {
      t = parse_timestamp(fields[0]);
      std::size_t used = 0;
      v = std::stod(fields[column.value_field], &used);
      if (used != fields[column.value_field].size()) bad_row(path, row);
    } catch (const Error&) {
      bad_row(path, row);
    } catch (const std::exception&) {
      bad_row(path, row);
    }
    rows.push_back({t, v});
  }
  if (rows.empty()) bad_row(path, 0);
  std::sort(rows.begin(), rows.end(),
            [](const RawSample& a, const RawSample& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].t == rows[i - 1].t) {
      throw Error(Errc::duplicate_timestamp,
                  "duplicate timestamp " + format_timestamp(rows[i].t) + " in " +
                      path.string());
    }
  }
  return rows;
}

int count_fields_of_first_row(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_unreadable, "cannot open " + path.string());
  }
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    return static_cast<int>(split_fields(stripped).size());
  }
  bad_row(path, 0);
}

}  // namespace

TimeSeries load_csv_series(const std::filesystem::path& path,
                           const CsvColumn& column) {
  const auto rows = read_rows(path, column);

  TimeSeries out;
  out.start = rows.front().t;
  if (rows.size() == 1) {
    out.step = 0;
    out.values = Vector::Constant(1, rows.front().v);
    return out;
  }
  std::int64_t step = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    step = std::gcd(step, rows[i].t - rows[i - 1].t);
  }
  out.step = step;
  const auto n = (rows.back().t - rows.front().t) / step + 1;
  out.values = Vector::Constant(n, kMissing);
  for (const auto& r : rows) {
    out.values[(r.t - out.start) / step] = r.v;
  }
  return out;
}

OccupancyData load_occupancy_csv(const std::filesystem::path& path, int rooms) {
  OccupancyData data;
  const int fields = count_fields_of_first_row(path);
  if (fields >= 4) {
    data.broadcast = false;
    data.rooms.reserve(rooms);
    for (int r = 1; r <= rooms; ++r) {
      CsvColumn column;
      column.value_field = 3;
      column.zone_room = std::make_pair(1, r);
      data.rooms.push_back(load_csv_series(path, column));
    }
  } else {
    data.broadcast = true;
    const TimeSeries zone = load_csv_series(path);
    data.rooms.assign(rooms, zone);
  }
  return data;
}

TimeSeries slice(const TimeSeries& series, Timestamp start, Timestamp stop) {
  if (series.size() == 0 || series.step <= 0 || start >= stop) {
    throw Error(Errc::window_outside_data, "window [" + format_timestamp(start) +
                                               ", " + format_timestamp(stop) +
                                               ") selects no data");
  }
  const std::int64_t step = series.step;
  const auto n = (stop - start + step - 1) / step;
  TimeSeries out;
  out.start = start;
  out.step = step;
  out.values = Vector::Constant(n, kMissing);
  bool any = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Timestamp t = start + k * step;
    const std::int64_t offset = t - series.start;
    if (offset < 0 || offset % step != 0) continue;
    const std::int64_t i = offset / step;
    if (i >= series.size()) continue;
    out.values[k] = series.values[i];
    any = true;
  }
  if (!any) {
    throw Error(Errc::window_outside_data,
                "window [" + format_timestamp(start) + ", " +
                    format_timestamp(stop) + ") lies outside the data span");
  }
  return out;
}

namespace {

Vector fill_gaps(const Vector& raw, SignalKind kind) {
  const auto n = raw.size();
  Eigen::Index first_valid = -1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isnan(raw[i])) {
      first_valid = i;
      break;
    }
  }
  if (first_valid < 0) {
    throw Error(Errc::all_values_missing, "series has no usable samples");
  }

  Vector filled(n);
  if (kind == SignalKind::binary) {
    double held = raw[first_valid] >= 0.5 ? 1.0 : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isnan(raw[i])) held = raw[i] >= 0.5 ? 1.0 : 0.0;
      filled[i] = held;
    }
    // Leading gap: no previous value exists, hold the first observation back.
    for (Eigen::Index i = 0; i < first_valid; ++i) filled[i] = filled[first_valid];
    return filled;
  }

  Eigen::Index prev = -1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isnan(raw[i])) continue;
    if (prev < 0) {
      for (Eigen::Index j = 0; j <= i; ++j) filled[j] = raw[i];
    } else {
      for (Eigen::Index j = prev + 1; j <= i; ++j) {
        const double w = static_cast<double>(j - prev) / static_cast<double>(i - prev);
        filled[j] = raw[prev] + w * (raw[i] - raw[prev]);
      }
    }
    prev = i;
  }
  for (Eigen::Index j = prev + 1; j < n; ++j) filled[j] = raw[prev];
  return filled;
}

}  // namespace

TimeSeries preprocess(const TimeSeries& series, std::int64_t target_step,
                      SignalKind kind) {
  if (series.size() == 0) {
    throw Error(Errc::all_values_missing, "series has no usable samples");
  }
  const Vector filled = fill_gaps(series.values, kind);

  TimeSeries out;
  out.start = series.start;
  out.step = target_step;
  if (series.step == target_step || series.size() == 1 || series.step == 0) {
    out.values = filled;
    return out;
  }

  const std::int64_t span = series.step * series.size();
  const auto n_out = std::max<std::int64_t>(1, span / target_step);
  out.values = Vector(n_out);

  if (kind == SignalKind::continuous) {
    for (std::int64_t k = 0; k < n_out; ++k) {
      const double x = static_cast<double>(k * target_step) /
                       static_cast<double>(series.step);
      const auto i0 = static_cast<Eigen::Index>(std::floor(x));
      if (i0 >= series.size() - 1) {
        out.values[k] = filled[series.size() - 1];
      } else {
        const double w = x - static_cast<double>(i0);
        out.values[k] = filled[i0] + w * (filled[i0 + 1] - filled[i0]);
      }
    }
    return out;
  }

  if (target_step < series.step) {
    // Upsample bits by repetition.
    for (std::int64_t k = 0; k < n_out; ++k) {
      const auto i = std::min<std::int64_t>(k * target_step / series.step,
                                            series.size() - 1);
      out.values[k] = filled[i];
    }
    return out;
  }

  // Downsample bits by majority vote per bucket, ties toward occupied.
  for (std::int64_t k = 0; k < n_out; ++k) {
    const Timestamp lo = k * target_step;
    const Timestamp hi = lo + target_step;
    int ones = 0;
    int total = 0;
    for (std::int64_t i = lo / series.step;
         i < series.size() && i * series.step < hi; ++i) {
      if (i * series.step < lo) continue;
      ++total;
      if (filled[i] >= 0.5) ++ones;
    }
    out.values[k] = (2 * ones >= total) ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace zonesim
