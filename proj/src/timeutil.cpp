#include "ttp/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "ttp/error.hpp"

namespace ttp {

namespace {

bool parse_fields(const char* p, const char* end, const char* pattern, unsigned* out,
                  const char** rest) {
  // pattern: 'd' = digit run start (consumes exactly the digits given by the
  // following count char), literal otherwise
  int field = 0;
  while (*pattern) {
    if (*pattern == 'd') {
      ++pattern;
      int want = *pattern - '0';
      ++pattern;
      unsigned v = 0;
      int got = 0;
      while (got < want && p < end && *p >= '0' && *p <= '9') {
        v = v * 10 + static_cast<unsigned>(*p - '0');
        ++p;
        ++got;
      }
      if (got != want) return false;
      out[field++] = v;
    } else {
      if (p >= end || *p != *pattern) return false;
      ++p;
      ++pattern;
    }
  }
  *rest = p;
  return true;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
  const char* p = text.data();
  const char* end = p + text.size();
  if (text.empty()) fail(Errc::parse, "empty timestamp");

  // plain integer epoch seconds (optionally negative)
  {
    std::int64_t v = 0;
    auto res = std::from_chars(p, end, v);
    if (res.ec == std::errc() && res.ptr == end) return v;
  }

  unsigned f[3] = {0, 0, 0};
  const char* rest = nullptr;
  if (!parse_fields(p, end, "d4-d2-d2", f, &rest))
    fail(Errc::parse, "bad timestamp: '" + text + "'");
  const int year = static_cast<int>(f[0]);
  const unsigned month = f[1], day = f[2];
  if (month < 1 || month > 12 || day < 1 || day > 31)
    fail(Errc::parse, "bad timestamp: '" + text + "'");
  unsigned hh = 0, mm = 0, ss = 0;
  if (rest < end) {
    if (*rest != 'T' && *rest != ' ') fail(Errc::parse, "bad timestamp: '" + text + "'");
    ++rest;
    unsigned g[2] = {0, 0};
    if (!parse_fields(rest, end, "d2:d2", g, &rest))
      fail(Errc::parse, "bad timestamp: '" + text + "'");
    hh = g[0];
    mm = g[1];
    if (rest < end) {
      unsigned h[1] = {0};
      if (!parse_fields(rest, end, ":d2", h, &rest) || rest != end)
        fail(Errc::parse, "bad timestamp: '" + text + "'");
      ss = h[0];
    }
    if (hh > 23 || mm > 59 || ss > 60) fail(Errc::parse, "bad timestamp: '" + text + "'");
  }
  return timestamp_utc(year, month, day, hh, mm, ss);
}

std::string format_timestamp(std::int64_t ts) {
  std::int64_t days = ts / 86400;
  std::int64_t sod = ts % 86400;
  if (sod < 0) {
    sod += 86400;
    --days;
  }
  const CivilDate cd = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld", cd.year, cd.month, cd.day,
                static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                static_cast<long long>(sod % 60));
  return buf;
}

}  // namespace ttp
