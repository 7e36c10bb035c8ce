#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttp/stats.hpp"
#include "ttp/trips.hpp"
#include "ttp/weights.hpp"

namespace ttp {

// SMD: sum of per-segment medians. SMN: sum of per-segment means.
// COM: (1-w_k)*SMD + w_k*SMN. MED: median of whole-trip times over the exact
// route.
enum class Method { SMD, SMN, COM, MED };

const char* method_name(Method m);
std::optional<Method> method_from_string(const std::string& s);

struct ProvenanceCounts {
  int fresh = 0;
  int stale = 0;
  int historical = 0;
};

struct RouteEstimates {
  double smd = 0.0;
  double smn = 0.0;
  int k = 0;
  ProvenanceCounts prov;
  std::int64_t max_window = 0;  // most recent window consulted, for leak audits
};

// One pass over the route, fetching each segment's estimate at `window` with
// the store's fallback ladder. Throws no_data if any segment is unresolvable.
RouteEstimates gather_route_estimates(const StatsStore& store, const Route& route,
                                      std::int64_t window);

// Eq-of-the-estimator combination; w is clamped to [0,1] so the result stays
// between SMD and SMN even if a weight function was fit out of range.
double combine(double smd, double smn, double w);

struct RoutePrediction {
  Method method = Method::SMD;
  double seconds = 0.0;
  int k = 0;
  ProvenanceCounts prov;
  std::int64_t max_window = 0;
};

RoutePrediction predict_smd(const StatsStore& store, const Route& route, std::int64_t window);
RoutePrediction predict_smn(const StatsStore& store, const Route& route, std::int64_t window);
RoutePrediction predict_com(const StatsStore& store, const Route& route, std::int64_t window,
                            const WeightFunction& wf);

// Whole-trip travel times keyed by exact segment sequence, with the same
// window fallback ladder as StatsStore. Backs the MED predictor.
class RouteHistory {
 public:
  RouteHistory() = default;
  RouteHistory(TimeGrid grid, int lookback = 6);

  void add(const Route& route, std::int64_t window, double seconds);
  void add_trip(const Trip& trip);
  void finalize();
  void set_historical_range(std::int64_t from_ts, std::int64_t to_ts);

  // nullopt when no matching trips are reachable from `window`: MED is
  // simply infeasible for that route, which is the common case.
  std::optional<Estimate> median_estimate(const Route& route, std::int64_t window) const;

  const TimeGrid& grid() const { return grid_; }
  std::size_t route_count() const { return routes_.size(); }

 private:
  struct Cell {
    std::vector<double> samples;
    double median = 0.0;
  };
  struct PerRoute {
    std::map<std::int64_t, Cell> windows;
    Cell hist;
    bool has_hist = false;
  };

  TimeGrid grid_;
  int lookback_ = 6;
  std::map<Route, PerRoute> routes_;
  std::int64_t hist_upper_ = 0;
  bool hist_upper_set_ = false;
};

std::optional<RoutePrediction> predict_med(const RouteHistory& hist, const Route& route,
                                           std::int64_t window);

// Picks the candidate with the smallest predicted time; ties go to the first.
// Candidates whose prediction fails are skipped; all failing is an error.
std::size_t choose_route(const std::vector<Route>& candidates,
                         const std::function<std::optional<double>(const Route&)>& predictor);

// trip_id, k, method, predicted_s, actual_s, length_m, provenance
std::string format_prediction_row(const std::string& trip_id, const RoutePrediction& pred,
                                  double actual_s, double length_m);

}  // namespace ttp
