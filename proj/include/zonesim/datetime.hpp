#pragma once

#include <string>
#include <string_view>

#include "zonesim/types.hpp"

namespace zonesim {

// Timestamps use the compact yyyymmddThhmm notation, minute resolution.
Timestamp parse_timestamp(std::string_view text);  // throws Errc::malformed_timestamp
std::string format_timestamp(Timestamp t);

Date date_of(Timestamp t);
Timestamp start_of_day(Date d);
std::string format_date(Date d);  // yyyymmdd
Date make_date(int year, int month, int day);

}  // namespace zonesim
