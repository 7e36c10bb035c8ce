#pragma once

#include <cstdint>
#include <vector>

#include "ttp/rng.hpp"

namespace ttp {

// Brute-force and Monte-Carlo checks for the median-of-sum facts the
// estimator design rests on. They are deliberately independent of the
// production code paths so they can act as oracles in tests.

// Exact median over every one-pick-per-list sum (the full cross product).
// Throws when the product of list sizes exceeds the budget.
double median_of_sum_exhaustive(const std::vector<std::vector<double>>& lists,
                                std::uint64_t budget = 10000000);

// Aligned-rows semantics: lists must share a length; the population is the
// per-row sums. This is the reading under which the worked 3x5 table gives
// median 24 against a sum of column medians of 20.
double median_of_sum_rowwise(const std::vector<std::vector<double>>& lists);

double median_of_sum_mc(const std::vector<std::vector<double>>& lists, std::size_t trials,
                        Rng& rng);

struct ImpliedWeight {
  double w = 0.0;
  bool in_range = false;       // w in [0,1]
  bool indeterminate = false;  // per-segment means equal medians, any w works
  double median_sum = 0.0;
  double sum_medians = 0.0;
  double sum_means = 0.0;
};

// Solves (1-w)*sum_medians + w*sum_means = median_sum for w. The population
// result guarantees w in [0,1]; finite samples can land outside, which is
// exactly what this reports.
ImpliedWeight implied_weight(double median_sum, double sum_medians, double sum_means);

enum class SumSemantics { rowwise, cross_product };

ImpliedWeight verify_mixture_weight(const std::vector<std::vector<double>>& lists,
                                    SumSemantics semantics, std::uint64_t budget = 10000000);
// Monte-Carlo median for instances too large to enumerate.
ImpliedWeight verify_mixture_weight_mc(const std::vector<std::vector<double>>& lists,
                                       std::size_t trials, Rng& rng);

// Median-ordering check: for T = F(X) with X normal and F monotone increasing,
// P(T_A > T_B) > 1/2 exactly when median(T_A) > median(T_B).
enum class MonotoneTransform { identity, exponential, cube, affine };  // affine: 3 + 2x

double apply_transform(MonotoneTransform f, double x);

struct MedianOrderResult {
  double p_hat = 0.0;  // empirical P(T_A > T_B)
  double median_a = 0.0;
  double median_b = 0.0;
  bool conclusive = false;  // false when medians tie or p_hat sits in the dead band
  bool agree = false;       // (p_hat > 1/2) matches (median_a > median_b)
};

// dead_band_se: half-width of the inconclusive zone around 1/2, in binomial
// standard errors of p_hat.
MedianOrderResult verify_median_order(double mu_a, double sigma_a, double mu_b, double sigma_b,
                                      MonotoneTransform f, std::size_t trials, Rng& rng,
                                      double dead_band_se = 3.0);

}  // namespace ttp
