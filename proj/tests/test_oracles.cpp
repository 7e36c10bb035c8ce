#include <cmath>
#include <vector>

#include "doctest.h"
#include "ttp/error.hpp"
#include "ttp/oracles.hpp"
#include "ttp/rng.hpp"
#include "ttp/summary.hpp"

using namespace ttp;

namespace {

// The worked 3-segment, 5-observation table used throughout the suite.
// Aligned rows sum to {16,17,24,25,34}; column medians are 5, 7, 8.
const std::vector<std::vector<double>> kTable = {
    {1, 3, 5, 10, 20},
    {7, 3, 2, 9, 11},
    {8, 11, 17, 6, 3},
};

}  // namespace

TEST_CASE("median of aligned row sums differs from the sum of column medians") {
  CHECK(median_of_sum_rowwise(kTable) == 24.0);

  double sum_of_medians = 0.0;
  for (const auto& col : kTable) sum_of_medians += median_of(col);
  CHECK(sum_of_medians == 20.0);
}

TEST_CASE("rowwise median requires aligned lists") {
  CHECK_THROWS_AS(median_of_sum_rowwise({{1, 2}, {3}}), Error);
  CHECK_THROWS_AS(median_of_sum_rowwise({}), Error);
}

TEST_CASE("exhaustive cross-product median") {
  // {1,3} x {10} -> sums {11,13}, even count, midpoint 12
  CHECK(median_of_sum_exhaustive({{1, 3}, {10}}) == 12.0);
  // single list degenerates to the plain median
  CHECK(median_of_sum_exhaustive({{5, 1, 9}}) == 5.0);
  // enumeration budget is enforced
  std::vector<std::vector<double>> big(8, std::vector<double>(100, 1.0));
  CHECK_THROWS_AS(median_of_sum_exhaustive(big, 1000), Error);
}

TEST_CASE("monte carlo median converges to the exhaustive one") {
  const std::vector<std::vector<double>> lists = {{1, 2, 3, 4, 5}, {2, 4, 6}, {1, 9}};
  const double exact = median_of_sum_exhaustive(lists);
  Rng rng(42);
  const double mc = median_of_sum_mc(lists, 200000, rng);
  CHECK(mc == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("implied weight solves the combination identity") {
  // target exactly between sum-of-medians 10 and sum-of-means 14
  auto iw = implied_weight(12.0, 10.0, 14.0);
  CHECK(iw.w == doctest::Approx(0.5));
  CHECK(iw.in_range);
  CHECK_FALSE(iw.indeterminate);

  // degenerate: means equal medians, any weight reproduces the target
  auto degen = implied_weight(10.0, 10.0, 10.0);
  CHECK(degen.indeterminate);
  CHECK(degen.in_range);
}

TEST_CASE("worked table yields weight 1.25, outside the unit interval") {
  // On finite samples the population guarantee w in [0,1] can fail; this
  // fixed table is the canonical counterexample and must report it.
  auto iw = verify_mixture_weight(kTable, SumSemantics::rowwise);
  CHECK(iw.median_sum == 24.0);
  CHECK(iw.sum_medians == 20.0);
  CHECK(iw.sum_means == doctest::Approx(23.2).epsilon(1e-12));
  CHECK(iw.w == doctest::Approx(1.25).epsilon(1e-9));
  CHECK_FALSE(iw.in_range);
}

TEST_CASE("cross-product semantics give a different implied weight than rowwise") {
  auto cross = verify_mixture_weight(kTable, SumSemantics::cross_product);
  // same margins, so the same means and medians per column
  CHECK(cross.sum_medians == 20.0);
  CHECK(cross.sum_means == doctest::Approx(23.2).epsilon(1e-12));
  // but the median over all 125 sums is its own quantity
  CHECK(cross.median_sum == median_of_sum_exhaustive(kTable));
  CHECK(cross.median_sum != doctest::Approx(24.0));
}

TEST_CASE("implied weight lands in range for iid positively skewed samples") {
  // Sampled counterpart of the population statement: with large per-segment
  // histories the implied weight should sit inside [0,1] essentially always.
  int in_range = 0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(mix_seed(777, static_cast<std::uint64_t>(rep)));
    std::vector<std::vector<double>> lists(5);
    for (auto& l : lists) {
      l.resize(2000);
      for (auto& v : l) v = lognormal(rng, 0.0, 1.0);
    }
    auto iw = verify_mixture_weight_mc(lists, 50000, rng);
    if (iw.in_range) ++in_range;
  }
  CHECK(in_range >= reps - 1);
}

TEST_CASE("monotone transforms evaluate as documented") {
  CHECK(apply_transform(MonotoneTransform::identity, 2.0) == 2.0);
  CHECK(apply_transform(MonotoneTransform::exponential, 0.0) == 1.0);
  CHECK(apply_transform(MonotoneTransform::cube, 2.0) == 8.0);
  CHECK(apply_transform(MonotoneTransform::affine, 2.0) == 7.0);
}

TEST_CASE("median ordering matches stochastic ordering under monotone transforms") {
  Rng rng(1);
  for (auto f : {MonotoneTransform::identity, MonotoneTransform::exponential,
                 MonotoneTransform::cube, MonotoneTransform::affine}) {
    auto res = verify_median_order(0.3, 1.0, -0.2, 0.7, f, 40000, rng);
    CHECK(res.conclusive);
    CHECK(res.agree);
    CHECK(res.median_a > res.median_b);

    // swapped means flip the ordering but agreement must persist
    auto swapped = verify_median_order(-0.2, 0.7, 0.3, 1.0, f, 40000, rng);
    CHECK(swapped.conclusive);
    CHECK(swapped.agree);
    CHECK(swapped.median_a < swapped.median_b);
  }
}

TEST_CASE("median ordering check reports ties as inconclusive") {
  Rng rng(2);
  auto res =
      verify_median_order(0.0, 1.0, 0.0, 2.0, MonotoneTransform::identity, 40000, rng);
  CHECK_FALSE(res.conclusive);
}
