#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttp/network.hpp"

namespace ttp {

struct Traversal {
  std::uint32_t segment = 0;  // index into the reference network
  double seconds = 0.0;
};

struct Trip {
  std::string id;
  std::int64_t start_ts = 0;
  std::int64_t end_ts = 0;
  std::vector<Traversal> traversals;

  double total_seconds() const {
    double s = 0.0;
    for (const Traversal& t : traversals) s += t.seconds;
    return s;
  }
  Route route() const {
    Route r;
    r.reserve(traversals.size());
    for (const Traversal& t : traversals) r.push_back(t.segment);
    return r;
  }
  int k() const { return static_cast<int>(traversals.size()); }
};

// Discrete half-open windows [origin + j*delta, origin + (j+1)*delta).
struct TimeGrid {
  int delta_min = 10;
  std::int64_t origin = 0;

  std::int64_t delta_s() const { return static_cast<std::int64_t>(delta_min) * 60; }
  std::int64_t window_of(std::int64_t ts) const {
    const std::int64_t d = delta_s();
    std::int64_t off = ts - origin;
    // floor division, timestamps may precede the origin
    return off >= 0 ? off / d : -((-off + d - 1) / d);
  }
  std::int64_t window_start(std::int64_t w) const { return origin + w * delta_s(); }
};

// A trip contributes statistics to the window containing its end time.
inline std::int64_t estimation_window(const TimeGrid& grid, const Trip& trip) {
  return grid.window_of(trip.end_ts);
}

// Predictions for a trip use the window immediately preceding the one
// containing its start time. A trip starting in the first grid window (or
// earlier) has no complete prior window; that is the nullopt case.
inline std::optional<std::int64_t> prediction_window(const TimeGrid& grid, const Trip& trip) {
  const std::int64_t s = grid.window_of(trip.start_ts);
  if (s <= 0) return std::nullopt;
  return s - 1;
}

struct RejectedRecord {
  std::size_t line_no = 0;
  std::string trip_id;  // may be empty when the record was unparseable
  std::string reason;   // parse | unknown_segment | connectivity | nonpositive_time
};

struct TripParseResult {
  std::vector<Trip> trips;
  std::vector<RejectedRecord> rejects;
};

// One JSON object per line: {"trip_id","start_ts","segments":[{"id","t"},...]}.
// Bad records are collected into `rejects`; an unreadable file throws.
TripParseResult parse_trips(const std::string& path, const RoadNetwork& net);

void save_trips(const std::vector<Trip>& trips, const RoadNetwork& net, const std::string& path);
void write_rejects(const std::vector<RejectedRecord>& rejects, const std::string& path);

}  // namespace ttp
