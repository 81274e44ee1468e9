#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "zonesim/timeseries.hpp"
#include "zonesim/types.hpp"

namespace zonesim {

// One calendar day of occupancy, one bit per sampling interval.
struct OccupancyString {
  Date day = 0;
  BitVector bits;

  Eigen::Index length() const { return bits.size(); }
  double fraction() const {
    return bits.size() == 0 ? 0.0 : bits.cast<double>().mean();
  }
};

// Pairwise percentage Hamming distances between day strings. Symmetric with
// a zero diagonal; cell order follows the input day order.
struct ErrorMatrix {
  std::vector<Date> days;
  Matrix cells;

  Eigen::Index index_of(Date day) const;  // -1 when absent
};

struct ErrorPair {
  OccupancyString reference;
  OccupancyString erroneous;
  double achieved_error = 0;   // percent, Hamming(reference, erroneous)/L
  double final_tolerance = 0;  // band half-width after any widening
};

// Splits a preprocessed binary series into whole-day strings.
std::vector<OccupancyString> to_day_strings(const TimeSeries& occupancy);

// Percentage of mismatched positions.
double hamming_error(const OccupancyString& a, const OccupancyString& b);

ErrorMatrix build_error_matrix(const std::vector<OccupancyString>& strings);

// Database string closest to day_string in Hamming distance; ties go to the
// earliest date. The caller keeps the day under analysis out of the database.
const OccupancyString& select_reference(const OccupancyString& day_string,
                                        const std::vector<OccupancyString>& database);

// Draws one string whose error against the reference lies within
// [target - tolerance, target + tolerance], widening the band by one
// percentage point at a time when it is empty. Deterministic per seed.
ErrorPair select_erroneous(const OccupancyString& reference,
                           const std::vector<OccupancyString>& strings,
                           const ErrorMatrix& matrix, double target,
                           double tolerance, std::uint64_t rng_seed);

// Matrix cache: CSV with a date header row; recomputation reproduces it.
void write_matrix_csv(const ErrorMatrix& matrix, const std::filesystem::path& path);
ErrorMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace zonesim
