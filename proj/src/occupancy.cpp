#include "zonesim/occupancy.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "zonesim/datetime.hpp"
#include "zonesim/error.hpp"
#include "zonesim/rng.hpp"

namespace zonesim {

Eigen::Index ErrorMatrix::index_of(Date day) const {
  for (std::size_t i = 0; i < days.size(); ++i) {
    if (days[i] == day) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

std::vector<OccupancyString> to_day_strings(const TimeSeries& occupancy) {
  if (occupancy.step <= 0 || kSecondsPerDay % occupancy.step != 0) {
    throw Error(Errc::partial_day,
                "occupancy step must divide a day, got " +
                    std::to_string(occupancy.step) + " s");
  }
  const std::int64_t per_day = kSecondsPerDay / occupancy.step;
  if (occupancy.start % kSecondsPerDay != 0 ||
      occupancy.size() % per_day != 0 || occupancy.size() == 0) {
    throw Error(Errc::partial_day,
                "occupancy span must be whole days starting at midnight");
  }
  std::vector<OccupancyString> strings;
  const auto n_days = occupancy.size() / per_day;
  strings.reserve(n_days);
  for (Eigen::Index d = 0; d < n_days; ++d) {
    OccupancyString s;
    s.day = date_of(occupancy.start + d * kSecondsPerDay);
    s.bits = BitVector(per_day);
    for (Eigen::Index k = 0; k < per_day; ++k) {
      s.bits[k] = occupancy.values[d * per_day + k] >= 0.5 ? 1 : 0;
    }
    strings.push_back(std::move(s));
  }
  return strings;
}

double hamming_error(const OccupancyString& a, const OccupancyString& b) {
  if (a.length() != b.length()) {
    throw Error(Errc::length_mismatch,
                "occupancy strings differ in length: " +
                    std::to_string(a.length()) + " vs " +
                    std::to_string(b.length()));
  }
  const auto mismatches = (a.bits != b.bits).count();
  return 100.0 * static_cast<double>(mismatches) /
         static_cast<double>(a.length());
}

ErrorMatrix build_error_matrix(const std::vector<OccupancyString>& strings) {
  if (strings.size() < 2) {
    throw Error(Errc::too_few_strings,
                "error matrix needs at least two day strings");
  }
  const auto n = static_cast<Eigen::Index>(strings.size());
  ErrorMatrix m;
  m.days.reserve(strings.size());
  for (const auto& s : strings) m.days.push_back(s.day);
  m.cells = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double e = hamming_error(strings[i], strings[j]);
      m.cells(i, j) = e;
      m.cells(j, i) = e;
    }
  }
  return m;
}

const OccupancyString& select_reference(
    const OccupancyString& day_string,
    const std::vector<OccupancyString>& database) {
  if (database.empty()) {
    throw Error(Errc::empty_database, "reference database is empty");
  }
  const OccupancyString* best = &database.front();
  double best_error = hamming_error(day_string, database.front());
  for (std::size_t i = 1; i < database.size(); ++i) {
    const double e = hamming_error(day_string, database[i]);
    if (e < best_error || (e == best_error && database[i].day < best->day)) {
      best = &database[i];
      best_error = e;
    }
  }
  return *best;
}

ErrorPair select_erroneous(const OccupancyString& reference,
                           const std::vector<OccupancyString>& strings,
                           const ErrorMatrix& matrix, double target,
                           double tolerance, std::uint64_t rng_seed) {
  const Eigen::Index ref = matrix.index_of(reference.day);
  if (ref < 0 || strings.size() != matrix.days.size()) {
    throw Error(Errc::empty_database,
                "reference day is not a row of the error matrix");
  }
  if (target == 0.0) {
    return {reference, reference, 0.0, tolerance};
  }
  if (matrix.days.size() < 2) {
    throw Error(Errc::no_candidate_at_any_tolerance,
                "error matrix has a single row; no erroneous string exists");
  }

  // The reference itself (diagonal zero) is not a candidate: an erroneous
  // string at a positive target must be a different string, otherwise the
  // widening loop would stop at the diagonal instead of a real neighbour.
  std::vector<Eigen::Index> candidates;
  double band = tolerance;
  while (true) {
    candidates.clear();
    for (Eigen::Index j = 0; j < matrix.cells.cols(); ++j) {
      if (j == ref) continue;
      const double cell = matrix.cells(ref, j);
      if (cell >= target - band && cell <= target + band) candidates.push_back(j);
    }
    if (!candidates.empty()) break;
    band += 1.0;
  }

  SplitMix64 rng(rng_seed);
  const Eigen::Index pick =
      candidates[rng.next_below(static_cast<std::uint64_t>(candidates.size()))];
  ErrorPair pair;
  pair.reference = reference;
  pair.erroneous = strings[static_cast<std::size_t>(pick)];
  pair.achieved_error = matrix.cells(ref, pick);
  pair.final_tolerance = band;
  return pair;
}

void write_matrix_csv(const ErrorMatrix& matrix,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::write_failed, "cannot write " + path.string());
  }
  out << "day";
  for (Date d : matrix.days) out << "," << format_date(d);
  out << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < matrix.cells.rows(); ++i) {
    out << format_date(matrix.days[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < matrix.cells.cols(); ++j) {
      // Full precision: recomputing the matrix must reproduce the cache.
      std::snprintf(buf, sizeof(buf), "%.17g", matrix.cells(i, j));
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) {
    throw Error(Errc::write_failed, "failed writing " + path.string());
  }
}

ErrorMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_unreadable, "cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::unparsable_row, "matrix cache is empty: " + path.string());
  }
  ErrorMatrix m;
  {
    std::stringstream header(line);
    std::string field;
    std::getline(header, field, ',');  // "day"
    while (std::getline(header, field, ',')) {
      const Timestamp t = parse_timestamp(field + "T0000");
      m.days.push_back(date_of(t));
    }
  }
  const auto n = static_cast<Eigen::Index>(m.days.size());
  m.cells = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw Error(Errc::unparsable_row,
                  "matrix cache truncated: " + path.string());
    }
    std::stringstream row(line);
    std::string field;
    std::getline(row, field, ',');  // day label
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::getline(row, field, ',')) {
        throw Error(Errc::unparsable_row,
                    "matrix cache truncated: " + path.string());
      }
      m.cells(i, j) = std::stod(field);
    }
  }
  return m;
}

}  // namespace zonesim
