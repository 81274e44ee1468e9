#include "zonesim/datetime.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "zonesim/error.hpp"

namespace zonesim {

namespace {

// Civil <-> day-count conversions after Howard Hinnant's chrono algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

bool leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                  31, 31, 30, 31, 30, 31};
  if (m == 2 && leap(y)) return 29;
  return lengths[m - 1];
}

[[noreturn]] void bad_timestamp(std::string_view text) {
  throw Error(Errc::malformed_timestamp,
              "malformed timestamp '" + std::string(text) +
                  "', expected yyyymmddThhmm");
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  if (text.size() != 13 || text[8] != 'T') bad_timestamp(text);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i == 8) continue;
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) bad_timestamp(text);
  }
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (text[i] - '0');
    return v;
  };
  const int year = num(0, 4);
  const int month = num(4, 2);
  const int day = num(6, 2);
  const int hour = num(9, 2);
  const int minute = num(11, 2);
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
      hour > 23 || minute > 59) {
    bad_timestamp(text);
  }
  return days_from_civil(year, month, day) * kSecondsPerDay + hour * 3600 +
         minute * 60;
}

std::string format_timestamp(Timestamp t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d%02d%02dT%02d%02d", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60));
  return buf;
}

Date date_of(Timestamp t) {
  std::int64_t days = t / kSecondsPerDay;
  if (t % kSecondsPerDay < 0) --days;
  return static_cast<Date>(days);
}

Timestamp start_of_day(Date d) { return static_cast<Timestamp>(d) * kSecondsPerDay; }

std::string format_date(Date d) {
  int y, m, dd;
  civil_from_days(d, y, m, dd);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d%02d%02d", y, m, dd);
  return buf;
}

Date make_date(int year, int month, int day) {
  return static_cast<Date>(days_from_civil(year, month, day));
}

}  // namespace zonesim
