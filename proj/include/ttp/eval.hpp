#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttp/network.hpp"
#include "ttp/predict.hpp"
#include "ttp/trips.hpp"
#include "ttp/weights.hpp"

namespace ttp {

struct PredictionRecord {
  double predicted = 0.0;
  double actual = 0.0;
  double length_m = 0.0;
};

struct MetricReport {
  std::uint64_t m = 0;   // trips
  double mae = 0.0;      // mean absolute error, seconds
  double mse = 0.0;
  double rmse = 0.0;
  // Two readings of the length-standardized error coexist in the protocol:
  // the displayed formula sums |err|/L_km without dividing by m, while the
  // stated identity m*MAE/sum(L_km) divides by total length. They disagree
  // whenever trip lengths differ, so both are reported.
  double mae_star = 0.0;
  double mae_star_identity = 0.0;
  double relative_mae = 1.0;  // this method's MAE over the baseline's
};

// Baseline rows must cover the same trips (counts checked). relative_mae is
// mae/baseline_mae; two zero MAEs count as identical methods, ratio 1.
MetricReport compute_metrics(const std::vector<PredictionRecord>& preds,
                             const std::vector<PredictionRecord>& baseline);

// Streaming variant used by the protocol runner.
class ErrAccum {
 public:
  void add(double predicted, double actual, double length_m);
  std::uint64_t count() const { return m_; }
  double mae() const;
  MetricReport report(double baseline_mae) const;

 private:
  std::uint64_t m_ = 0;
  double abs_sum_ = 0.0;
  double sq_sum_ = 0.0;
  double abs_over_len_sum_ = 0.0;  // sum of |err| / L_km
  double len_km_sum_ = 0.0;
};

struct ProtocolConfig {
  std::int64_t train_from = 0;  // half-open [from, to)
  std::int64_t train_to = 0;
  std::int64_t test_from = 0;
  std::int64_t test_to = 0;
  std::vector<int> deltas_min;
  std::vector<Method> methods;  // SMN is always computed as the baseline
  // Fixed-route study: evaluation restricted to test trips following exactly
  // this route, reported per prefix length k (MED becomes available).
  std::optional<Route> fixed_route;
  int lookback = 6;
  std::int64_t origin = 0;
  bool audit = false;             // track that no prediction touches the start window
  std::string out_dir;            // .dat report files; empty writes nothing
  std::string dump_predictions;   // per-trip prediction rows; empty writes nothing
};

struct GroupMetrics {
  int key = 0;  // month as yyyymm, or prefix length k in fixed-route mode
  std::map<Method, MetricReport> by_method;
};

struct AuditSummary {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
};

struct DeltaReport {
  int delta_min = 0;
  std::map<Method, MetricReport> overall;
  std::vector<GroupMetrics> months;
  std::vector<GroupMetrics> per_k;  // fixed-route mode only
  std::uint64_t trips_evaluated = 0;
  std::uint64_t skipped_no_prior_window = 0;
  std::uint64_t skipped_no_data = 0;
};

struct ProtocolResult {
  std::vector<DeltaReport> deltas;
  AuditSummary audit;
};

// Train/test protocol: statistics accumulate over all trips ending before the
// test range closes, the historical fallback aggregates the training range
// only, weights come in pre-learned, and every test trip is predicted from
// the window preceding its start. Reports are grouped by month (and by prefix
// k in fixed-route mode) per discretization step.
ProtocolResult run_protocol(const RoadNetwork& net, const std::vector<Trip>& trips,
                            const WeightFunction* wf, const ProtocolConfig& cfg);

}  // namespace ttp
