#pragma once

#include <algorithm>
#include <vector>

#include "ttp/error.hpp"

namespace ttp {

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) fail(Errc::invalid_argument, "mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Median with the even-size midpoint convention. Input must be sorted.
inline double median_sorted(const std::vector<double>& v) {
  if (v.empty()) fail(Errc::invalid_argument, "median of empty sample");
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return median_sorted(v);
}

}  // namespace ttp
