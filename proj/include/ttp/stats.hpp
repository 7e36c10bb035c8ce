#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ttp/network.hpp"
#include "ttp/trips.hpp"

namespace ttp {

enum class Provenance { fresh, stale, historical };

const char* provenance_name(Provenance p);

struct Estimate {
  double mean = 0.0;
  double median = 0.0;
  std::uint64_t count = 0;
  Provenance provenance = Provenance::fresh;
  // Most recent window that may have contributed data. Used by leak audits;
  // always <= the queried window.
  std::int64_t window = 0;
};

// Per-segment, per-window travel time summaries with a fallback ladder for
// empty windows: the queried window itself, then up to `lookback` windows
// back, then an aggregate over a declared historical range.
//
// Samples are kept per (segment, window) and sorted at finalize, so medians
// are exact and the finished store does not depend on insertion order.
class StatsStore {
 public:
  struct Summary {
    std::uint64_t count = 0;
    double mean = 0.0;
    double median = 0.0;
  };

  StatsStore() = default;
  StatsStore(const RoadNetwork& net, TimeGrid grid, int lookback = 6);

  void add_trip(const Trip& trip);
  void add_observation(std::uint32_t seg, std::int64_t window, double seconds);

  // Sorts and compacts the retained samples. Required before estimate/save.
  void finalize();
  // Concatenates another store's pending observations; both stores must not
  // be finalized yet. Partial builds merged in any order finalize identically.
  void merge_from(StatsStore&& other);

  // Declares [from_ts, to_ts) as the historical range and aggregates every
  // window fully inside it. Call after finalize.
  void set_historical_range(std::int64_t from_ts, std::int64_t to_ts);
  bool has_historical() const { return hist_upper_set_; }

  Estimate estimate(std::uint32_t seg, std::int64_t window) const;

  const TimeGrid& grid() const { return grid_; }
  int lookback() const { return lookback_; }
  std::size_t segment_count() const { return segments_.size(); }
  std::uint64_t total_observations() const;

  void save(const std::string& path) const;
  // Loaded stores carry summaries only; they serve estimates but cannot
  // accumulate further observations.
  static StatsStore load(const std::string& path, const RoadNetwork& net);

  // Exact-window access, mainly for tests and export. Null when empty.
  const Summary* window_summary(std::uint32_t seg, std::int64_t window) const;

 private:
  struct SegmentData {
    // pending observations, consumed by finalize
    std::vector<std::pair<std::int64_t, double>> pending;
    // finalized form: windows sorted ascending, offsets index into samples
    std::vector<std::int64_t> windows;
    std::vector<std::uint64_t> offsets;  // size windows.size()+1
    std::vector<Summary> summaries;
    std::vector<double> samples;  // sorted within each window block
    Summary hist;
    bool has_hist = false;
  };

  TimeGrid grid_;
  int lookback_ = 6;
  std::vector<std::string> ids_;  // segment ids, index-aligned with the network
  std::vector<SegmentData> segments_;
  bool finalized_ = false;
  bool summaries_only_ = false;
  // Upper bound (inclusive window index) on data in the historical aggregates;
  // the aggregate is served only for queries at or after this window.
  std::int64_t hist_upper_ = 0;
  bool hist_upper_set_ = false;
};

// Convenience builder: accumulate + finalize in one call.
StatsStore accumulate(const RoadNetwork& net, const std::vector<Trip>& trips, TimeGrid grid,
                      int lookback = 6);

}  // namespace ttp
