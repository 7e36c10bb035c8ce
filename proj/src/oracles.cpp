#include "ttp/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "ttp/error.hpp"
#include "ttp/summary.hpp"

namespace ttp {

double median_of_sum_exhaustive(const std::vector<std::vector<double>>& lists,
                                std::uint64_t budget) {
  if (lists.empty()) fail(Errc::invalid_argument, "no lists");
  std::uint64_t total = 1;
  for (const auto& l : lists) {
    if (l.empty()) fail(Errc::invalid_argument, "empty list");
    if (l.size() > budget / total)
      fail(Errc::infeasible, "cross product exceeds enumeration budget");
    total *= l.size();
  }

  std::vector<double> sums;
  sums.reserve(total);
  std::vector<std::size_t> pick(lists.size(), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < lists.size(); ++j) s += lists[j][pick[j]];
    sums.push_back(s);
    // odometer increment
    for (std::size_t j = lists.size(); j-- > 0;) {
      if (++pick[j] < lists[j].size()) break;
      pick[j] = 0;
    }
  }
  return median_of(std::move(sums));
}

double median_of_sum_rowwise(const std::vector<std::vector<double>>& lists) {
  if (lists.empty()) fail(Errc::invalid_argument, "no lists");
  const std::size_t rows = lists.front().size();
  if (rows == 0) fail(Errc::invalid_argument, "empty list");
  for (const auto& l : lists)
    if (l.size() != rows) fail(Errc::invalid_argument, "row-aligned lists must share a length");
  std::vector<double> sums(rows, 0.0);
  for (const auto& l : lists)
    for (std::size_t r = 0; r < rows; ++r) sums[r] += l[r];
  return median_of(std::move(sums));
}

double median_of_sum_mc(const std::vector<std::vector<double>>& lists, std::size_t trials,
                        Rng& rng) {
  if (lists.empty()) fail(Errc::invalid_argument, "no lists");
  if (trials == 0) fail(Errc::invalid_argument, "trials must be >= 1");
  for (const auto& l : lists)
    if (l.empty()) fail(Errc::invalid_argument, "empty list");
  std::vector<double> sums(trials, 0.0);
  for (const auto& l : lists)
    for (double& s : sums) s += l[uniform_index(rng, l.size())];
  return median_of(std::move(sums));
}

ImpliedWeight implied_weight(double median_sum, double sum_medians, double sum_means) {
  ImpliedWeight out;
  out.median_sum = median_sum;
  out.sum_medians = sum_medians;
  out.sum_means = sum_means;
  const double denom = sum_means - sum_medians;
  if (denom == 0.0) {
    out.indeterminate = true;
    out.w = 0.0;
    out.in_range = true;  // any w reproduces the median exactly
    return out;
  }
  out.w = (median_sum - sum_medians) / denom;
  out.in_range = out.w >= 0.0 && out.w <= 1.0;
  return out;
}

namespace {

ImpliedWeight weight_from_lists(const std::vector<std::vector<double>>& lists,
                                double median_sum) {
  double sum_medians = 0.0;
  double sum_means = 0.0;
  for (const auto& l : lists) {
    sum_medians += median_of(l);
    double s = 0.0;
    for (double v : l) s += v;
    sum_means += s / static_cast<double>(l.size());
  }
  return implied_weight(median_sum, sum_medians, sum_means);
}

}  // namespace

ImpliedWeight verify_mixture_weight(const std::vector<std::vector<double>>& lists,
                                    SumSemantics semantics, std::uint64_t budget) {
  const double med = semantics == SumSemantics::rowwise ? median_of_sum_rowwise(lists)
                                                        : median_of_sum_exhaustive(lists, budget);
  return weight_from_lists(lists, med);
}

ImpliedWeight verify_mixture_weight_mc(const std::vector<std::vector<double>>& lists,
                                       std::size_t trials, Rng& rng) {
  return weight_from_lists(lists, median_of_sum_mc(lists, trials, rng));
}

double apply_transform(MonotoneTransform f, double x) {
  switch (f) {
    case MonotoneTransform::identity: return x;
    case MonotoneTransform::exponential: return std::exp(x);
    case MonotoneTransform::cube: return x * x * x;
    case MonotoneTransform::affine: return 3.0 + 2.0 * x;
  }
  fail(Errc::invalid_argument, "unknown transform");
}

MedianOrderResult verify_median_order(double mu_a, double sigma_a, double mu_b, double sigma_b,
                                      MonotoneTransform f, std::size_t trials, Rng& rng,
                                      double dead_band_se) {
  if (trials == 0) fail(Errc::invalid_argument, "trials must be >= 1");
  if (!(sigma_a > 0.0) || !(sigma_b > 0.0)) fail(Errc::invalid_argument, "sigmas must be > 0");

  MedianOrderResult out;
  // a monotone transform maps the normal's median mu straight through
  out.median_a = apply_transform(f, mu_a);
  out.median_b = apply_transform(f, mu_b);

  std::uint64_t wins = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const double ta = apply_transform(f, mu_a + sigma_a * standard_normal(rng));
    const double tb = apply_transform(f, mu_b + sigma_b * standard_normal(rng));
    if (ta > tb) ++wins;
  }
  out.p_hat = static_cast<double>(wins) / static_cast<double>(trials);

  const double se = std::sqrt(0.25 / static_cast<double>(trials));
  const bool medians_tie = out.median_a == out.median_b;
  const bool p_in_band = std::abs(out.p_hat - 0.5) < dead_band_se * se;
  out.conclusive = !medians_tie && !p_in_band;
  out.agree = out.conclusive && ((out.p_hat > 0.5) == (out.median_a > out.median_b));
  return out;
}

}  // namespace ttp
