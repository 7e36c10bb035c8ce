#include "ttp/trips.hpp"

#include <cmath>
#include <fstream>

#include "format.hpp"
#include "json.hpp"

namespace ttp {

using nlohmann::json;

namespace {

// Returns the rejection reason, or empty when the record is good.
std::string parse_record(const json& j, const RoadNetwork& net, Trip* out) {
  if (!j.is_object()) return "parse";
  auto id_it = j.find("trip_id");
  auto start_it = j.find("start_ts");
  auto seg_it = j.find("segments");
  if (id_it == j.end() || !id_it->is_string()) return "parse";
  out->id = id_it->get<std::string>();
  if (start_it == j.end() || !start_it->is_number_integer()) return "parse";
  if (seg_it == j.end() || !seg_it->is_array() || seg_it->empty()) return "parse";

  out->start_ts = start_it->get<std::int64_t>();
  out->traversals.clear();
  out->traversals.reserve(seg_it->size());
  double total = 0.0;
  std::uint32_t prev = 0;
  bool first = true;
  for (const json& s : *seg_it) {
    if (!s.is_object()) return "parse";
    auto sid = s.find("id");
    auto st = s.find("t");
    if (sid == s.end() || !sid->is_string() || st == s.end() || !st->is_number()) return "parse";
    const std::string& seg_id = sid->get_ref<const std::string&>();
    if (!net.contains(seg_id)) return "unknown_segment";
    const std::uint32_t idx = net.index_of(seg_id);
    const double t = st->get<double>();
    if (!(t > 0.0) || !std::isfinite(t)) return "nonpositive_time";
    if (!first) {
      const auto& succ = net.segment(prev).successors;
      if (std::find(succ.begin(), succ.end(), idx) == succ.end()) return "connectivity";
    }
    out->traversals.push_back(Traversal{idx, t});
    total += t;
    prev = idx;
    first = false;
  }
  out->end_ts = out->start_ts + std::llround(total);
  return "";
}

}  // namespace

TripParseResult parse_trips(const std::string& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open trip file '" + path + "'");

  TripParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    Trip trip;
    std::string reason;
    if (j.is_discarded()) {
      reason = "parse";
    } else {
      reason = parse_record(j, net, &trip);
    }
    if (reason.empty()) {
      result.trips.push_back(std::move(trip));
    } else {
      result.rejects.push_back(RejectedRecord{line_no, trip.id, reason});
    }
  }
  if (in.bad()) fail(Errc::io, "read error on '" + path + "'");
  return result;
}

void save_trips(const std::vector<Trip>& trips, const RoadNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  const auto append_escaped = [](std::string& buf, const std::string& s) {
    for (char c : s) {
      if (c == '"' || c == '\\') buf += '\\';
      buf += c;
    }
  };
  std::string buf;
  for (const Trip& trip : trips) {
    buf.clear();
    buf += "{\"trip_id\":\"";
    append_escaped(buf, trip.id);
    buf += "\",\"start_ts\":";
    buf += std::to_string(trip.start_ts);
    buf += ",\"segments\":[";
    for (std::size_t i = 0; i < trip.traversals.size(); ++i) {
      if (i) buf += ',';
      buf += "{\"id\":\"";
      append_escaped(buf, net.segment(trip.traversals[i].segment).id);
      buf += "\",\"t\":";
      buf += fmt_double(trip.traversals[i].seconds);
      buf += '}';
    }
    buf += "]}\n";
    out << buf;
  }
  if (!out) fail(Errc::io, "write error on '" + path + "'");
}

void write_rejects(const std::vector<RejectedRecord>& rejects, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  out << "#line\ttrip_id\treason\n";
  for (const RejectedRecord& r : rejects)
    out << r.line_no << '\t' << r.trip_id << '\t' << r.reason << '\n';
  if (!out) fail(Errc::io, "write error on '" + path + "'");
}

}  // namespace ttp
