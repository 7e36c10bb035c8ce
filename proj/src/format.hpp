#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

#include "ttp/error.hpp"

// Shortest round-trip number formatting, so files reparse to bit-identical
// values and output never depends on locale.

namespace ttp {

inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) fail(Errc::internal, "number formatting failed");
  return std::string(buf, res.ptr);
}

inline std::string fmt_double_fixed(double v, int precision) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  if (res.ec != std::errc()) fail(Errc::internal, "number formatting failed");
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) fail(Errc::parse, "bad number: '" + s + "'");
  return v;
}

inline std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) fail(Errc::parse, "bad integer: '" + s + "'");
  return v;
}

}  // namespace ttp
