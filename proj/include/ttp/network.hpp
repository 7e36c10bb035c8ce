#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/rng.hpp"

namespace ttp {

struct Segment {
  std::string id;
  double length_m = 0.0;
  std::vector<std::uint32_t> successors;  // indices into RoadNetwork::segments
};

// A route is an ordered list of segment indices; consecutive entries must be
// connected by a successor link.
using Route = std::vector<std::uint32_t>;

class RoadNetwork {
 public:
  std::uint32_t add_segment(const std::string& id, double length_m);
  void add_link(std::uint32_t from, std::uint32_t to);

  std::size_t size() const { return segments_.size(); }
  const Segment& segment(std::uint32_t idx) const { return segments_[idx]; }
  const std::vector<Segment>& segments() const { return segments_; }

  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  std::uint32_t index_of(const std::string& id) const;

  bool is_connected_route(const Route& route) const;
  double route_length_m(const Route& route) const;
  double total_length_m() const;

  // Uniform random start, then a uniform successor at each step. A dead end
  // before k segments restarts the whole walk; gives up after a fixed number
  // of restarts.
  Route random_walk_route(Rng& rng, std::size_t k) const;

 private:
  std::vector<Segment> segments_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Tab-separated rows: id, length in meters, comma-joined successor ids (the
// field may be empty). Lines starting with '#' and blank lines are skipped.
RoadNetwork load_network(const std::string& path);
void save_network(const RoadNetwork& net, const std::string& path);

// Route spec forms accepted on the command line and in configs:
//   "a,b,c"      explicit comma-joined segment ids
//   "main44"     every segment whose id starts with "main44_", ordered by the
//                numeric suffix
Route resolve_route_spec(const RoadNetwork& net, const std::string& spec);

std::string route_to_string(const RoadNetwork& net, const Route& route);

}  // namespace ttp
