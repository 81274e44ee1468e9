#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "zonesim/types.hpp"

namespace zonesim {

// A regularly sampled scalar trace. Sample k sits at start + k*step and the
// series spans [start, start + size*step). NaN marks a missing sample; after
// preprocess() no NaN remains.
struct TimeSeries {
  Timestamp start = 0;
  std::int64_t step = 0;
  Vector values;

  Eigen::Index size() const { return values.size(); }
  Timestamp stop() const { return start + step * static_cast<std::int64_t>(size()); }
  Timestamp time_at(Eigen::Index k) const { return start + step * static_cast<std::int64_t>(k); }
  bool has_missing() const { return values.hasNaN(); }
};

enum class SignalKind {
  continuous,  // gap fill and resample by linear interpolation
  binary,      // hold previous value; downsample by per-bucket majority vote
};

// Selects which CSV field carries the value and, for multi-room occupancy
// files (timestamp,zone,room,bit), which (zone,room) rows to keep.
struct CsvColumn {
  int value_field = 1;
  std::optional<std::pair<int, int>> zone_room;
};

TimeSeries load_csv_series(const std::filesystem::path& path,
                           const CsvColumn& column = {});

// Per-room occupancy traces. Two-field files (timestamp,bit) describe the
// whole zone and are broadcast to every room.
struct OccupancyData {
  std::vector<TimeSeries> rooms;
  bool broadcast = false;
};

OccupancyData load_occupancy_csv(const std::filesystem::path& path, int rooms);

// Restrict a series to [start, stop). Grid slots inside the window that the
// data does not cover come back as missing samples.
TimeSeries slice(const TimeSeries& series, Timestamp start, Timestamp stop);

TimeSeries preprocess(const TimeSeries& series, std::int64_t target_step,
                      SignalKind kind);

}  // namespace zonesim
