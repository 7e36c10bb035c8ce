#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttp/network.hpp"
#include "ttp/rng.hpp"
#include "ttp/trips.hpp"

namespace ttp {

// Flat per-segment sample pools drawn from a training range, the raw material
// for weight learning. Means and medians are precomputed per segment.
class SegmentHistory {
 public:
  // Collects every traversal of trips whose end time falls in [from_ts,
  // to_ts). hour_from/hour_to (half-open, UTC hours of day, by trip end time)
  // optionally restrict to a time-of-day partition; pass {-1,-1} for none.
  static SegmentHistory from_trips(const RoadNetwork& net, const std::vector<Trip>& trips,
                                   std::int64_t from_ts, std::int64_t to_ts, int hour_from = -1,
                                   int hour_to = -1);
  static SegmentHistory from_samples(std::vector<std::vector<double>> samples);

  std::size_t segment_count() const { return samples_.size(); }
  bool has_data(std::uint32_t seg) const {
    return seg < samples_.size() && !samples_[seg].empty();
  }
  const std::vector<double>& samples(std::uint32_t seg) const { return samples_[seg]; }
  double mean(std::uint32_t seg) const { return mean_[seg]; }
  double median(std::uint32_t seg) const { return median_[seg]; }
  std::uint64_t total_samples() const;

 private:
  std::vector<std::vector<double>> samples_;
  std::vector<double> mean_;
  std::vector<double> median_;
};

struct WeightDataPoint {
  int k = 0;
  double w_opt = 0.0;
  Route route;
  double true_median = 0.0;  // exact median of the h synthetic route sums
  double smd = 0.0;          // sum of per-segment historical medians
  double smn = 0.0;          // sum of per-segment historical means
};

struct LearnParams {
  int k_max = 30;
  int h = 1000;          // synthetic trips per data point
  int n_points = 10000;  // data points to generate
  double grid_step = 0.01;
  int route_retries = 1000;  // walks hitting unobserved segments are redrawn
  // When set, routes are prefixes of this route (length drawn uniformly)
  // instead of random walks, for learning a single route's own weights.
  std::optional<Route> fixed_route;
};

// Argmin over w in {0, step, 2*step, ..., 1} of |(1-w)*smd + w*smn - target|.
// Ties go to the smaller w. step must divide 1 evenly.
double grid_search_weight(double smd, double smn, double target, double grid_step);

WeightDataPoint generate_datapoint(const RoadNetwork& net, const SegmentHistory& hist,
                                   const LearnParams& p, Rng& rng);

// N points with per-point derived seeds, so the stream is reproducible and
// order-independent.
std::vector<WeightDataPoint> generate_datapoints(const RoadNetwork& net,
                                                 const SegmentHistory& hist, const LearnParams& p,
                                                 std::uint64_t seed);

enum class FitMode { table, smoothed };

// k -> w_k lookup with linear interpolation across gaps and clamp-to-last
// extrapolation past the covered range. w_1 is 0 by construction.
class WeightFunction {
 public:
  WeightFunction() = default;
  WeightFunction(FitMode mode, std::map<int, double> table, int k_max);

  double eval(int k) const;

  FitMode mode() const { return mode_; }
  int k_max() const { return k_max_; }
  bool empty() const { return table_.empty(); }
  const std::map<int, double>& table() const { return table_; }
  // ks in [1, k_max] that had no data points (table mode keeps them as gaps)
  const std::vector<int>& gaps() const { return gaps_; }
  void set_gaps(std::vector<int> gaps) { gaps_ = std::move(gaps); }

  // data points per k seen while fitting; empty for loaded functions
  const std::map<int, std::uint64_t>& point_counts() const { return point_counts_; }
  void set_point_counts(std::map<int, std::uint64_t> counts) {
    point_counts_ = std::move(counts);
  }

  // Tab-separated k/w rows under a comment header recording parameters.
  void save(const std::string& path, const std::string& params_comment = "") const;
  static WeightFunction load(const std::string& path);

 private:
  FitMode mode_ = FitMode::table;
  std::map<int, double> table_;
  int k_max_ = 0;
  std::vector<int> gaps_;
  std::map<int, std::uint64_t> point_counts_;
};

// Table mode: w_k = mean of w_opt per k, clamped, w_1 forced to 0. Smoothed
// mode: local averaging of the table over [k-bandwidth, k+bandwidth], gaps
// filled by interpolation first, anchor and range preserved.
WeightFunction fit_weight_function(const std::vector<WeightDataPoint>& points, FitMode mode,
                                   int bandwidth = 3);

}  // namespace ttp
