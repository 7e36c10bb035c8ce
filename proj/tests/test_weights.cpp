#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "ttp/error.hpp"
#include "ttp/oracles.hpp"
#include "ttp/rng.hpp"
#include "ttp/summary.hpp"
#include "ttp/timeutil.hpp"
#include "ttp/weights.hpp"

using namespace ttp;

namespace {

// worked 3-column table; columns are per-segment sample pools
const std::vector<std::vector<double>> kTable = {
    {1, 3, 5, 10, 20},
    {7, 3, 2, 9, 11},
    {8, 11, 17, 6, 3},
};

// brute re-evaluation of every grid point, the oracle for grid_search_weight
double brute_weight(double smd, double smn, double target, double step) {
  const long long n = std::llround(1.0 / step);
  double best_w = 0.0;
  double best_err = std::abs(smd - target);
  for (long long i = 1; i <= n; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(n);
    const double err = std::abs((1.0 - w) * smd + w * smn - target);
    if (err < best_err) {
      best_err = err;
      best_w = w;
    }
  }
  return best_w;
}

}  // namespace

TEST_CASE("grid search finds the weight that reproduces the target") {
  // target exactly halfway between the two sums
  CHECK(grid_search_weight(10.0, 12.0, 11.0, 0.01) == doctest::Approx(0.5));
  // targets at or beyond the endpoints clamp to them
  CHECK(grid_search_weight(10.0, 12.0, 9.0, 0.01) == 0.0);
  CHECK(grid_search_weight(10.0, 12.0, 13.0, 0.01) == 1.0);
}

TEST_CASE("grid search breaks ties toward the smaller weight") {
  // sums 0 and 1 with step 0.5: target 0.25 is equidistant from w=0 and w=0.5
  CHECK(grid_search_weight(0.0, 1.0, 0.25, 0.5) == 0.0);
  // degenerate equal sums: every weight matches, keep the smallest
  CHECK(grid_search_weight(5.0, 5.0, 5.0, 0.01) == 0.0);
}

TEST_CASE("grid step must divide the unit interval") {
  CHECK_THROWS_AS(grid_search_weight(0.0, 1.0, 0.5, 0.3), Error);
  CHECK_THROWS_AS(grid_search_weight(0.0, 1.0, 0.5, 0.0), Error);
  CHECK_THROWS_AS(grid_search_weight(0.0, 1.0, 0.5, -0.1), Error);
}

TEST_CASE("grid search agrees with brute enumeration on random instances") {
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const double smd = uniform_real(rng, 0.0, 100.0);
    const double smn = smd + uniform_real(rng, 0.0, 50.0);
    const double target = uniform_real(rng, smd - 10.0, smn + 10.0);
    CHECK(grid_search_weight(smd, smn, target, 0.01) ==
          brute_weight(smd, smn, target, 0.01));
  }
}

TEST_CASE("worked table as a three-segment toy: exhaustive oracle checks out") {
  // all 125 equally likely sums, brute-forced
  const double true_median = median_of_sum_exhaustive(kTable);
  double smd = 0.0, smn = 0.0;
  for (const auto& col : kTable) {
    smd += median_of(col);
    smn += mean_of(col);
  }
  CHECK(smd == 20.0);
  CHECK(smn == doctest::Approx(23.2).epsilon(1e-12));

  const double w = grid_search_weight(smd, smn, true_median, 0.01);
  CHECK(w == brute_weight(smd, smn, true_median, 0.01));
  // the mixture at the found weight lands within half a grid cell of target
  CHECK(std::abs((1.0 - w) * smd + w * smn - true_median) <=
        0.5 * 0.01 * (smn - smd) + 1e-12);
}

TEST_CASE("segment histories collect training-range traversals") {
  const RoadNetwork net = testsup::chain_network(2);
  std::vector<Trip> trips;
  trips.push_back(testsup::obs_trip("in1", 0, 100, 10.0));
  trips.push_back(testsup::obs_trip("in2", 0, 200, 20.0));
  trips.push_back(testsup::obs_trip("out", 0, 5000, 99.0));  // past the range
  trips.push_back(testsup::obs_trip("other", 1, 150, 7.0));

  const auto hist = SegmentHistory::from_trips(net, trips, 0, 1000);
  REQUIRE(hist.segment_count() == 2);
  CHECK(hist.has_data(0));
  CHECK(hist.samples(0).size() == 2);
  CHECK(hist.mean(0) == doctest::Approx(15.0));
  CHECK(hist.median(0) == doctest::Approx(15.0));
  CHECK(hist.samples(1).size() == 1);
  CHECK(hist.total_samples() == 3);
}

TEST_CASE("segment histories can restrict to an hour-of-day partition") {
  const RoadNetwork net = testsup::chain_network(1);
  std::vector<Trip> trips;
  trips.push_back(testsup::obs_trip("am", 0, timestamp_utc(2000, 1, 3, 8, 30), 11.0));
  trips.push_back(testsup::obs_trip("pm", 0, timestamp_utc(2000, 1, 3, 19, 0), 33.0));

  const std::int64_t from = timestamp_utc(2000, 1, 1);
  const std::int64_t to = timestamp_utc(2000, 2, 1);
  const auto morning = SegmentHistory::from_trips(net, trips, from, to, 7, 10);
  CHECK(morning.samples(0) == std::vector<double>{11.0});
  const auto all = SegmentHistory::from_trips(net, trips, from, to);
  CHECK(all.samples(0).size() == 2);
}

TEST_CASE("generated data points are reproducible and well formed") {
  const RoadNetwork net = testsup::ring_network(6);
  Rng seed_rng(5);
  std::vector<std::vector<double>> pools(6);
  for (auto& p : pools) {
    p.resize(400);
    for (auto& v : p) v = lognormal(seed_rng, std::log(30.0), 1.0);
  }
  const auto hist = SegmentHistory::from_samples(pools);

  LearnParams params;
  params.k_max = 5;
  params.h = 200;

  Rng a(77), b(77);
  const auto p1 = generate_datapoint(net, hist, params, a);
  const auto p2 = generate_datapoint(net, hist, params, b);
  CHECK(p1.k == p2.k);
  CHECK(p1.w_opt == p2.w_opt);
  CHECK(p1.route == p2.route);
  CHECK(p1.true_median == p2.true_median);

  Rng c(78);
  for (int i = 0; i < 30; ++i) {
    const auto p = generate_datapoint(net, hist, params, c);
    CHECK(p.k >= 1);
    CHECK(p.k <= 5);
    CHECK(p.route.size() == static_cast<std::size_t>(p.k));
    CHECK(net.is_connected_route(p.route));
    CHECK(p.w_opt >= 0.0);
    CHECK(p.w_opt <= 1.0);
    CHECK(p.smd <= p.smn);  // positive skew: per-segment median below mean

    // smd and smn recompute from the route and the pools
    double smd = 0.0, smn = 0.0;
    for (const auto seg : p.route) {
      smd += hist.median(seg);
      smn += hist.mean(seg);
    }
    CHECK(p.smd == doctest::Approx(smd));
    CHECK(p.smn == doctest::Approx(smn));
  }
}

TEST_CASE("fixed-route learning draws prefixes of the given route") {
  const RoadNetwork net = testsup::chain_network(4);
  std::vector<std::vector<double>> pools(4, std::vector<double>{8, 9, 10, 11, 30});
  const auto hist = SegmentHistory::from_samples(pools);

  LearnParams params;
  params.h = 50;
  params.fixed_route = Route{0, 1, 2, 3};
  params.k_max = 30;  // clamped to the route length

  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto p = generate_datapoint(net, hist, params, rng);
    CHECK(p.k >= 1);
    CHECK(p.k <= 4);
    const Route expect(params.fixed_route->begin(), params.fixed_route->begin() + p.k);
    CHECK(p.route == expect);
  }
}

TEST_CASE("data point generation needs observed segments") {
  const RoadNetwork net = testsup::chain_network(2);
  // segment 1 has no samples at all
  const auto hist = SegmentHistory::from_samples({{5.0, 6.0, 7.0}, {}});
  LearnParams params;
  params.h = 10;
  params.fixed_route = Route{0, 1};
  params.k_max = 2;

  Rng rng(4);
  bool hit_uncovered = false;
  try {
    for (int i = 0; i < 50; ++i) generate_datapoint(net, hist, params, rng);
  } catch (const Error& e) {
    hit_uncovered = e.code() == Errc::no_data;
  }
  CHECK(hit_uncovered);
}

TEST_CASE("per-point seeding makes the batch reproducible") {
  const RoadNetwork net = testsup::ring_network(5);
  Rng fill(123);
  std::vector<std::vector<double>> pools(5);
  for (auto& p : pools) {
    p.resize(200);
    for (auto& v : p) v = lognormal(fill, 2.0, 0.8);
  }
  const auto hist = SegmentHistory::from_samples(pools);

  LearnParams params;
  params.k_max = 4;
  params.h = 100;
  params.n_points = 40;

  const auto run1 = generate_datapoints(net, hist, params, 2024);
  const auto run2 = generate_datapoints(net, hist, params, 2024);
  REQUIRE(run1.size() == run2.size());
  for (std::size_t i = 0; i < run1.size(); ++i) {
    CHECK(run1[i].k == run2[i].k);
    CHECK(run1[i].w_opt == run2[i].w_opt);
  }

  const auto other = generate_datapoints(net, hist, params, 2025);
  bool any_diff = false;
  for (std::size_t i = 0; i < run1.size(); ++i)
    if (run1[i].w_opt != other[i].w_opt || run1[i].route != other[i].route) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("table fit averages per k, anchors k=1 at zero, and records gaps") {
  std::vector<WeightDataPoint> points;
  auto add = [&](int k, double w) {
    WeightDataPoint p;
    p.k = k;
    p.w_opt = w;
    points.push_back(p);
  };
  add(1, 0.4);  // averaged away by the anchor rule
  add(2, 0.2);
  add(2, 0.4);
  add(4, 0.8);

  const auto wf = fit_weight_function(points, FitMode::table);
  CHECK(wf.mode() == FitMode::table);
  CHECK(wf.k_max() == 4);
  CHECK(wf.eval(1) == 0.0);
  CHECK(wf.eval(2) == doctest::Approx(0.3));
  CHECK(wf.eval(4) == doctest::Approx(0.8));
  // k=3 had no points: linear interpolation between neighbors
  CHECK(wf.eval(3) == doctest::Approx(0.55));
  CHECK(wf.gaps() == std::vector<int>{3});
  CHECK(wf.point_counts().at(2) == 2);

  // extrapolation holds the last value
  CHECK(wf.eval(10) == doctest::Approx(0.8));
}

TEST_CASE("smoothed fit is a local average and keeps the anchor") {
  std::vector<WeightDataPoint> points;
  auto add = [&](int k, double w) {
    WeightDataPoint p;
    p.k = k;
    p.w_opt = w;
    points.push_back(p);
  };
  for (int k = 1; k <= 6; ++k) add(k, 0.1 * (k - 1));

  const auto wf = fit_weight_function(points, FitMode::smoothed, 1);
  CHECK(wf.eval(1) == 0.0);
  // interior points average the [k-1, k+1] window of the raw table
  CHECK(wf.eval(3) == doctest::Approx((0.1 + 0.2 + 0.3) / 3.0));
  // at the upper edge the window truncates
  CHECK(wf.eval(6) == doctest::Approx((0.4 + 0.5) / 2.0));

  // monotone input stays monotone after smoothing
  for (int k = 2; k <= 6; ++k) CHECK(wf.eval(k) >= wf.eval(k - 1));
}

TEST_CASE("weight learning on skewed pools gives small weights for short routes") {
  const RoadNetwork net = testsup::ring_network(8);
  Rng fill(55);
  std::vector<std::vector<double>> pools(8);
  for (auto& p : pools) {
    p.resize(1000);
    for (auto& v : p) v = lognormal(fill, std::log(30.0), 1.0);
  }
  const auto hist = SegmentHistory::from_samples(pools);

  LearnParams params;
  params.k_max = 8;
  params.h = 400;
  params.n_points = 800;

  const auto points = generate_datapoints(net, hist, params, 99);
  const auto wf = fit_weight_function(points, FitMode::table);
  CHECK(wf.eval(1) == 0.0);
  CHECK(wf.eval(2) > 0.05);
  CHECK(wf.eval(2) < 0.6);
  CHECK(wf.eval(8) > wf.eval(2));
}

TEST_CASE("weight files round trip") {
  const auto dir = testsup::scratch_dir("weights_io");
  std::map<int, double> table{{1, 0.0}, {2, 0.25}, {5, 0.6875}};
  WeightFunction wf(FitMode::smoothed, table, 8);

  const auto path = (dir / "w.tsv").string();
  wf.save(path, "h=100 n=10");
  const auto back = WeightFunction::load(path);

  CHECK(back.mode() == FitMode::smoothed);
  CHECK(back.k_max() == 8);
  for (int k = 1; k <= 10; ++k) CHECK(back.eval(k) == wf.eval(k));
  CHECK(back.table().at(5) == 0.6875);
}

TEST_CASE("weight files reject malformed content") {
  const auto dir = testsup::scratch_dir("weights_badfile");

  const auto dup = dir / "dup.tsv";
  testsup::write_file(dup, "# mode table\n# k_max 3\n1\t0\n1\t0.5\n");
  CHECK_THROWS_AS(WeightFunction::load(dup.string()), Error);

  const auto range = dir / "range.tsv";
  testsup::write_file(range, "# mode table\n# k_max 3\n1\t0\n2\t1.5\n");
  CHECK_THROWS_AS(WeightFunction::load(range.string()), Error);

  const auto bad_k = dir / "bad_k.tsv";
  testsup::write_file(bad_k, "# mode table\n# k_max 3\n0\t0\n");
  CHECK_THROWS_AS(WeightFunction::load(bad_k.string()), Error);
}

TEST_CASE("weight function interpolation semantics") {
  WeightFunction wf(FitMode::table, {{1, 0.0}, {4, 0.6}, {7, 0.9}}, 7);
  CHECK(wf.eval(1) == 0.0);
  CHECK(wf.eval(2) == doctest::Approx(0.2));
  CHECK(wf.eval(3) == doctest::Approx(0.4));
  CHECK(wf.eval(4) == doctest::Approx(0.6));
  CHECK(wf.eval(6) == doctest::Approx(0.8));
  CHECK(wf.eval(7) == doctest::Approx(0.9));
  // beyond the table: hold the last learned value
  CHECK(wf.eval(40) == doctest::Approx(0.9));
}
