#include "ttp/network.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "format.hpp"

namespace ttp {

std::uint32_t RoadNetwork::add_segment(const std::string& id, double length_m) {
  if (id.empty()) fail(Errc::invalid_argument, "empty segment id");
  if (!(length_m > 0.0)) fail(Errc::invalid_argument, "segment '" + id + "': length must be > 0");
  if (index_.count(id)) fail(Errc::invalid_argument, "duplicate segment id '" + id + "'");
  const auto idx = static_cast<std::uint32_t>(segments_.size());
  segments_.push_back(Segment{id, length_m, {}});
  index_.emplace(id, idx);
  return idx;
}

void RoadNetwork::add_link(std::uint32_t from, std::uint32_t to) {
  if (from >= segments_.size() || to >= segments_.size())
    fail(Errc::invalid_argument, "link references unknown segment index");
  auto& succ = segments_[from].successors;
  if (std::find(succ.begin(), succ.end(), to) == succ.end()) succ.push_back(to);
}

std::uint32_t RoadNetwork::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(Errc::invalid_argument, "unknown segment id '" + id + "'");
  return it->second;
}

bool RoadNetwork::is_connected_route(const Route& route) const {
  if (route.empty()) return false;
  for (std::uint32_t idx : route)
    if (idx >= segments_.size()) return false;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    const auto& succ = segments_[route[i]].successors;
    if (std::find(succ.begin(), succ.end(), route[i + 1]) == succ.end()) return false;
  }
  return true;
}

double RoadNetwork::route_length_m(const Route& route) const {
  if (route.empty()) fail(Errc::invalid_argument, "empty route");
  double total = 0.0;
  for (std::uint32_t idx : route) {
    if (idx >= segments_.size()) fail(Errc::invalid_argument, "route references unknown segment");
    total += segments_[idx].length_m;
  }
  return total;
}

double RoadNetwork::total_length_m() const {
  double total = 0.0;
  for (const Segment& s : segments_) total += s.length_m;
  return total;
}

Route RoadNetwork::random_walk_route(Rng& rng, std::size_t k) const {
  if (k < 1) fail(Errc::invalid_argument, "walk length must be >= 1");
  if (segments_.empty()) fail(Errc::invalid_argument, "empty network");
  const int budget = 1000;
  for (int attempt = 0; attempt < budget; ++attempt) {
    Route route;
    route.reserve(k);
    route.push_back(static_cast<std::uint32_t>(uniform_index(rng, segments_.size())));
    while (route.size() < k) {
      const auto& succ = segments_[route.back()].successors;
      if (succ.empty()) break;  // dead end, restart the whole walk
      route.push_back(succ[uniform_index(rng, succ.size())]);
    }
    if (route.size() == k) return route;
  }
  fail(Errc::infeasible,
       "no walk of length " + std::to_string(k) + " found in " + std::to_string(budget) +
           " attempts");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

RoadNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open network file '" + path + "'");

  RoadNetwork net;
  // successor ids resolve after all segments are known
  std::vector<std::pair<std::size_t, std::string>> pending;  // (line, succ field)
  std::vector<std::uint32_t> row_segment;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3)
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": expected 3 tab-separated fields");
    double length = 0.0;
    try {
      length = parse_double(fields[1]);
    } catch (const Error&) {
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": bad length '" + fields[1] + "'");
    }
    if (!(length > 0.0))
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": non-positive length");
    std::uint32_t idx;
    try {
      idx = net.add_segment(fields[0], length);
    } catch (const Error& e) {
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    row_segment.push_back(idx);
    pending.emplace_back(line_no, fields[2]);
  }
  if (in.bad()) fail(Errc::io, "read error on '" + path + "'");

  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& [ln, field] = pending[i];
    if (field.empty()) continue;
    for (const std::string& succ_id : split(field, ',')) {
      if (succ_id.empty())
        fail(Errc::parse, path + ":" + std::to_string(ln) + ": empty successor id");
      if (!net.contains(succ_id))
        fail(Errc::parse,
             path + ":" + std::to_string(ln) + ": successor '" + succ_id + "' is not defined");
      net.add_link(row_segment[i], net.index_of(succ_id));
    }
  }
  return net;
}

void save_network(const RoadNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  out << "#segments\n";
  for (const Segment& s : net.segments()) {
    out << s.id << '\t' << fmt_double(s.length_m) << '\t';
    for (std::size_t i = 0; i < s.successors.size(); ++i) {
      if (i) out << ',';
      out << net.segment(s.successors[i]).id;
    }
    out << '\n';
  }
  if (!out) fail(Errc::io, "write error on '" + path + "'");
}

namespace {

// numeric suffix after the last '_', or -1
long suffix_number(const std::string& id, const std::string& prefix) {
  if (id.size() <= prefix.size() + 1) return -1;
  if (id.compare(0, prefix.size(), prefix) != 0 || id[prefix.size()] != '_') return -1;
  long v = 0;
  for (std::size_t i = prefix.size() + 1; i < id.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return -1;
    v = v * 10 + (id[i] - '0');
  }
  return v;
}

}  // namespace

Route resolve_route_spec(const RoadNetwork& net, const std::string& spec) {
  if (spec.empty()) fail(Errc::invalid_argument, "empty route spec");
  Route route;
  if (spec.find(',') != std::string::npos) {
    for (const std::string& id : split(spec, ',')) {
      if (id.empty()) fail(Errc::invalid_argument, "empty segment id in route spec");
      route.push_back(net.index_of(id));
    }
  } else if (net.contains(spec)) {
    route.push_back(net.index_of(spec));
  } else {
    // group form: all segments "<spec>_<number>", ordered by the number
    std::vector<std::pair<long, std::uint32_t>> members;
    for (std::uint32_t i = 0; i < net.size(); ++i) {
      long n = suffix_number(net.segment(i).id, spec);
      if (n >= 0) members.emplace_back(n, i);
    }
    if (members.empty())
      fail(Errc::invalid_argument, "route spec '" + spec + "' matches no segments");
    std::sort(members.begin(), members.end());
    for (auto& [n, idx] : members) route.push_back(idx);
  }
  if (!net.is_connected_route(route))
    fail(Errc::invalid_argument, "route spec '" + spec + "' is not a connected route");
  return route;
}

std::string route_to_string(const RoadNetwork& net, const Route& route) {
  std::string out;
  for (std::size_t i = 0; i < route.size(); ++i) {
    if (i) out += ',';
    out += net.segment(route[i]).id;
  }
  return out;
}

}  // namespace ttp
