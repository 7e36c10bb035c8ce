#include "ttp/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "format.hpp"

namespace ttp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

}  // namespace

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open config '" + path + "'");
  SynthConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    try {
      if (key == "n_segments") cfg.n_segments = static_cast<int>(parse_int(value));
      else if (key == "topology") cfg.topology = value;
      else if (key == "extra_successors") cfg.extra_successors = parse_double(value);
      else if (key == "main_road") cfg.main_road = parse_int(value) != 0;
      else if (key == "main_road_len") cfg.main_road_len = static_cast<int>(parse_int(value));
      else if (key == "len_min_m") cfg.len_min_m = parse_double(value);
      else if (key == "len_max_m") cfg.len_max_m = parse_double(value);
      else if (key == "time_model") cfg.time_model = value;
      else if (key == "mu") cfg.mu = parse_double(value);
      else if (key == "sigma") cfg.sigma = parse_double(value);
      else if (key == "mu_jitter") cfg.mu_jitter = parse_double(value);
      else if (key == "sigma_jitter") cfg.sigma_jitter = parse_double(value);
      else if (key == "scale_by_length") cfg.scale_by_length = parse_int(value) != 0;
      else if (key == "len_ref_m") cfg.len_ref_m = parse_double(value);
      else if (key == "speed_mu") cfg.speed_mu = parse_double(value);
      else if (key == "speed_sigma") cfg.speed_sigma = parse_double(value);
      else if (key == "peak_from") cfg.peak_from = static_cast<int>(parse_int(value));
      else if (key == "peak_to") cfg.peak_to = static_cast<int>(parse_int(value));
      else if (key == "peak_mu_shift") cfg.peak_mu_shift = parse_double(value);
      else if (key == "trips_per_hour") cfg.trips_per_hour = parse_double(value);
      else if (key == "start") cfg.start_ts = parse_timestamp(value);
      else if (key == "end") cfg.end_ts = parse_timestamp(value);
      else if (key == "k_min") cfg.k_min = static_cast<int>(parse_int(value));
      else if (key == "k_max") cfg.k_max = static_cast<int>(parse_int(value));
      else if (key == "main_road_share") cfg.main_road_share = parse_double(value);
      else if (key == "time_decimals") cfg.time_decimals = static_cast<int>(parse_int(value));
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value));
      else fail(Errc::parse, "unknown key '" + key + "'");
    } catch (const Error& e) {
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in.bad()) fail(Errc::io, "read error on '" + path + "'");
  validate(cfg);
  return cfg;
}

void validate(const SynthConfig& cfg) {
  if (cfg.n_segments < 1) fail(Errc::invalid_argument, "n_segments must be >= 1");
  if (cfg.topology != "random" && cfg.topology != "chain" && cfg.topology != "ring")
    fail(Errc::invalid_argument, "topology must be random, chain, or ring");
  if (cfg.extra_successors < 0.0) fail(Errc::invalid_argument, "extra_successors must be >= 0");
  if (cfg.main_road) {
    if (cfg.main_road_len < 1) fail(Errc::invalid_argument, "main_road_len must be >= 1");
    if (cfg.main_road_len > cfg.n_segments)
      fail(Errc::invalid_argument, "main_road_len exceeds n_segments");
  }
  if (!(cfg.len_min_m > 0.0) || cfg.len_max_m < cfg.len_min_m)
    fail(Errc::invalid_argument, "segment length bounds invalid");
  if (cfg.time_model != "lognormal_time" && cfg.time_model != "lognormal_speed")
    fail(Errc::invalid_argument, "time_model must be lognormal_time or lognormal_speed");
  if (!(cfg.sigma > 0.0)) fail(Errc::invalid_argument, "sigma must be > 0");
  if (cfg.mu_jitter < 0.0 || cfg.sigma_jitter < 0.0)
    fail(Errc::invalid_argument, "jitters must be >= 0");
  if (cfg.scale_by_length && !(cfg.len_ref_m > 0.0))
    fail(Errc::invalid_argument, "len_ref_m must be > 0");
  if (!(cfg.speed_sigma > 0.0) && cfg.time_model == "lognormal_speed")
    fail(Errc::invalid_argument, "speed_sigma must be > 0");
  if ((cfg.peak_from < 0) != (cfg.peak_to < 0))
    fail(Errc::invalid_argument, "peak_from and peak_to must be given together");
  if (cfg.peak_from >= 0 && (cfg.peak_from > 23 || cfg.peak_to > 24 || cfg.peak_from >= cfg.peak_to))
    fail(Errc::invalid_argument, "peak hours must satisfy 0 <= from < to <= 24");
  if (!(cfg.trips_per_hour >= 0.0)) fail(Errc::invalid_argument, "trips_per_hour must be >= 0");
  if (!(cfg.start_ts < cfg.end_ts)) fail(Errc::invalid_argument, "start must precede end");
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min)
    fail(Errc::invalid_argument, "route length bounds invalid");
  if (cfg.main_road_share < 0.0 || cfg.main_road_share > 1.0)
    fail(Errc::invalid_argument, "main_road_share must be in [0,1]");
  if (cfg.main_road_share > 0.0 && !cfg.main_road)
    fail(Errc::invalid_argument, "main_road_share needs main_road=1");
  if (cfg.time_decimals < 0 || cfg.time_decimals > 9)
    fail(Errc::invalid_argument, "time_decimals must be in [0,9]");
}

namespace {

std::string seg_name(const SynthConfig& cfg, int i) {
  // main road first: main44_01..main44_44, then s045..
  char buf[32];
  if (cfg.main_road && i < cfg.main_road_len) {
    std::snprintf(buf, sizeof(buf), "main%d_%02d", cfg.main_road_len, i + 1);
  } else {
    std::snprintf(buf, sizeof(buf), "s%03d", i + 1);
  }
  return buf;
}

}  // namespace

RoadNetwork generate_network(const SynthConfig& cfg, Rng& rng) {
  validate(cfg);
  RoadNetwork net;
  const int n = cfg.n_segments;
  for (int i = 0; i < n; ++i) {
    const double len = uniform_real(rng, cfg.len_min_m, cfg.len_max_m);
    net.add_segment(seg_name(cfg, i), std::round(len * 10.0) / 10.0);
  }

  if (cfg.topology == "chain") {
    for (int i = 0; i + 1 < n; ++i)
      net.add_link(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1));
  } else if (cfg.topology == "ring") {
    for (int i = 0; i < n; ++i)
      net.add_link(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i + 1) % n));
  } else {
    // a ring over a shuffled order keeps every segment on a cycle, so walks
    // never dead-end, then extra links add branching
    std::vector<std::uint32_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_index(rng, i)]);
    if (n > 1) {
      for (int i = 0; i < n; ++i)
        net.add_link(order[static_cast<std::size_t>(i)],
                     order[static_cast<std::size_t>((i + 1) % n)]);
    }
    for (int i = 0; i < n; ++i) {
      const std::uint64_t extra = n > 1 ? poisson(rng, cfg.extra_successors) : 0;
      for (std::uint64_t e = 0; e < extra; ++e) {
        // draw from the other n-1 segments so a road never feeds into itself
        auto to = static_cast<std::uint32_t>(uniform_index(rng, static_cast<std::size_t>(n - 1)));
        if (to >= static_cast<std::uint32_t>(i)) ++to;
        net.add_link(static_cast<std::uint32_t>(i), to);
      }
    }
  }

  if (cfg.main_road && cfg.main_road_len > 1) {
    for (int i = 0; i + 1 < cfg.main_road_len; ++i)
      net.add_link(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1));
  }
  return net;
}

namespace {

struct SegmentParams {
  double mu;
  double sigma;
};

std::vector<SegmentParams> derive_segment_params(const RoadNetwork& net, const SynthConfig& cfg,
                                                 std::uint64_t seed) {
  // own stream: trip generation order must not disturb per-segment parameters
  Rng rng(mix_seed(seed, 0x5e9'0000));
  std::vector<SegmentParams> params(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    double mu = cfg.mu;
    double sigma = cfg.sigma;
    if (cfg.mu_jitter > 0.0) mu += uniform_real(rng, -cfg.mu_jitter, cfg.mu_jitter);
    if (cfg.sigma_jitter > 0.0)
      sigma = std::max(0.05, sigma + uniform_real(rng, -cfg.sigma_jitter, cfg.sigma_jitter));
    params[i] = SegmentParams{mu, sigma};
  }
  return params;
}

double round_decimals(double v, int decimals) {
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  return std::round(v * scale) / scale;
}

}  // namespace

std::vector<Trip> generate_trips(const RoadNetwork& net, const SynthConfig& cfg,
                                 std::uint64_t seed) {
  validate(cfg);
  if (net.size() == 0) fail(Errc::invalid_argument, "empty network");
  const auto params = derive_segment_params(net, cfg, seed);

  Route main_route;
  if (cfg.main_road && cfg.main_road_share > 0.0) {
    for (int i = 0; i < cfg.main_road_len; ++i)
      main_route.push_back(static_cast<std::uint32_t>(i));
    if (!net.is_connected_route(main_route))
      fail(Errc::invalid_argument, "network lacks the marked main-road chain");
  }

  // smallest positive value on the rounding grid keeps times strictly positive
  double min_time = 1.0;
  for (int i = 0; i < cfg.time_decimals; ++i) min_time /= 10.0;

  std::vector<Trip> trips;
  const std::int64_t span_hours = (cfg.end_ts - cfg.start_ts + 3599) / 3600;
  for (std::int64_t hour = 0; hour < span_hours; ++hour) {
    // a derived seed per hour: any sub-range regenerates identically
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(hour) + 1));
    const std::int64_t hour_start = cfg.start_ts + hour * 3600;
    const std::int64_t hour_end = std::min(cfg.end_ts, hour_start + 3600);

    std::int64_t sod = hour_start % 86400;
    if (sod < 0) sod += 86400;
    const int hour_of_day = static_cast<int>(sod / 3600);
    const bool peak =
        cfg.peak_from >= 0 && hour_of_day >= cfg.peak_from && hour_of_day < cfg.peak_to;

    const std::uint64_t count = poisson(rng, cfg.trips_per_hour);
    for (std::uint64_t c = 0; c < count; ++c) {
      Trip trip;
      trip.start_ts =
          hour_start + static_cast<std::int64_t>(uniform_below(
                           rng, static_cast<std::uint64_t>(hour_end - hour_start)));

      Route route;
      if (!main_route.empty() && uniform01(rng) < cfg.main_road_share) {
        route = main_route;
      } else {
        const int k =
            cfg.k_min +
            static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cfg.k_max - cfg.k_min + 1)));
        route = net.random_walk_route(rng, static_cast<std::size_t>(k));
      }

      double total = 0.0;
      trip.traversals.reserve(route.size());
      for (std::uint32_t seg : route) {
        const SegmentParams& sp = params[seg];
        double t;
        if (cfg.time_model == "lognormal_speed") {
          const double speed = lognormal(rng, cfg.speed_mu + (peak ? -cfg.peak_mu_shift : 0.0),
                                         cfg.speed_sigma);
          t = net.segment(seg).length_m / speed;
        } else {
          t = lognormal(rng, sp.mu + (peak ? cfg.peak_mu_shift : 0.0), sp.sigma);
          if (cfg.scale_by_length) t *= net.segment(seg).length_m / cfg.len_ref_m;
        }
        t = round_decimals(t, cfg.time_decimals);
        if (t < min_time) t = min_time;
        trip.traversals.push_back(Traversal{seg, t});
        total += t;
      }
      trip.end_ts = trip.start_ts + std::llround(total);
      trips.push_back(std::move(trip));
    }
  }

  std::stable_sort(trips.begin(), trips.end(),
                   [](const Trip& a, const Trip& b) { return a.start_ts < b.start_ts; });
  char buf[24];
  for (std::size_t i = 0; i < trips.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "t%07zu", i + 1);
    trips[i].id = buf;
  }
  return trips;
}

}  // namespace ttp
