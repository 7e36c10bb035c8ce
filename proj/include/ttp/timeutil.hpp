#pragma once

#include <cstdint>
#include <string>

namespace ttp {

// Civil-calendar conversion (proleptic Gregorian, UTC, no leap seconds).
// Algorithms from Howard Hinnant's date notes.
struct CivilDate {
  int year;
  unsigned month;  // 1..12
  unsigned day;    // 1..31
};

inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {y + (m <= 2), m, d};
}

inline std::int64_t timestamp_utc(int y, unsigned mo, unsigned d, unsigned h = 0, unsigned mi = 0,
                                  unsigned s = 0) {
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

// (year, month) key for grouping, e.g. 2023-03 -> 202303.
inline int month_key(std::int64_t ts) {
  std::int64_t days = ts / 86400;
  if (ts % 86400 < 0) --days;
  const CivilDate cd = civil_from_days(days);
  return cd.year * 100 + static_cast<int>(cd.month);
}

// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM", "YYYY-MM-DDTHH:MM:SS" (a space may
// stand in for the 'T'), or a plain integer of epoch seconds.
std::int64_t parse_timestamp(const std::string& text);

std::string format_timestamp(std::int64_t ts);

}  // namespace ttp
