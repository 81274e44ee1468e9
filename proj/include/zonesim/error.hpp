#pragma once

#include <stdexcept>
#include <string>

namespace zonesim {

enum class Errc {
  missing_required_key,
  malformed_timestamp,
  out_of_range_value,
  file_unreadable,
  unparsable_row,
  duplicate_timestamp,
  window_outside_data,
  all_values_missing,
  partial_day,
  length_mismatch,
  too_few_strings,
  empty_database,
  no_candidate_at_any_tolerance,
  integration_unstable,
  infeasible_forecast,
  never_occupied,
  write_failed,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace zonesim
