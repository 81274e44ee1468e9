#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace zonesim {

// Dense types shared across the library. Rooms are indexed 0..rooms-1 within
// the single simulated zone; time-indexed matrices are (steps x rooms).
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using BitVector = Eigen::Array<int, Eigen::Dynamic, 1>;
using BitMatrix = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic>;

// Civil time, no time zones: seconds since 1970-01-01T00:00.
using Timestamp = std::int64_t;
// Whole days since 1970-01-01.
using Date = std::int32_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

}  // namespace zonesim
