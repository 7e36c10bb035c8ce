#include "ttp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "format.hpp"
#include "ttp/summary.hpp"

namespace ttp {

SegmentHistory SegmentHistory::from_trips(const RoadNetwork& net, const std::vector<Trip>& trips,
                                          std::int64_t from_ts, std::int64_t to_ts, int hour_from,
                                          int hour_to) {
  std::vector<std::vector<double>> samples(net.size());
  const bool hour_filter = hour_from >= 0 && hour_to >= 0;
  for (const Trip& trip : trips) {
    if (trip.end_ts < from_ts || trip.end_ts >= to_ts) continue;
    if (hour_filter) {
      std::int64_t sod = trip.end_ts % 86400;
      if (sod < 0) sod += 86400;
      const int hour = static_cast<int>(sod / 3600);
      if (hour < hour_from || hour >= hour_to) continue;
    }
    for (const Traversal& t : trip.traversals) samples[t.segment].push_back(t.seconds);
  }
  return from_samples(std::move(samples));
}

SegmentHistory SegmentHistory::from_samples(std::vector<std::vector<double>> samples) {
  SegmentHistory h;
  h.samples_ = std::move(samples);
  h.mean_.resize(h.samples_.size(), 0.0);
  h.median_.resize(h.samples_.size(), 0.0);
  for (std::size_t i = 0; i < h.samples_.size(); ++i) {
    auto& v = h.samples_[i];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    h.mean_[i] = s / static_cast<double>(v.size());
    h.median_[i] = median_sorted(v);
  }
  return h;
}

std::uint64_t SegmentHistory::total_samples() const {
  std::uint64_t n = 0;
  for (const auto& v : samples_) n += v.size();
  return n;
}

double grid_search_weight(double smd, double smn, double target, double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 1.0)
    fail(Errc::invalid_argument, "grid step must be in (0, 1]");
  const long long n_steps = std::llround(1.0 / grid_step);
  if (std::abs(n_steps * grid_step - 1.0) > 1e-9)
    fail(Errc::invalid_argument, "grid step must divide 1 evenly");
  double best_w = 0.0;
  double best_dev = std::abs(smd - target);  // w = 0
  for (long long i = 1; i <= n_steps; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(n_steps);
    const double dev = std::abs((1.0 - w) * smd + w * smn - target);
    if (dev < best_dev) {  // strict: ties keep the smaller w
      best_dev = dev;
      best_w = w;
    }
  }
  return best_w;
}

WeightDataPoint generate_datapoint(const RoadNetwork& net, const SegmentHistory& hist,
                                   const LearnParams& p, Rng& rng) {
  if (p.h < 1) fail(Errc::invalid_argument, "h must be >= 1");
  int k_max = p.k_max;
  if (p.fixed_route) {
    const int len = static_cast<int>(p.fixed_route->size());
    k_max = (k_max < 1 || k_max > len) ? len : k_max;
  }
  if (k_max < 1) fail(Errc::invalid_argument, "k_max must be >= 1");

  WeightDataPoint dp;
  dp.k = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k_max)));

  const auto covered = [&](const Route& r) {
    for (std::uint32_t seg : r)
      if (!hist.has_data(seg)) return false;
    return true;
  };

  if (p.fixed_route) {
    dp.route.assign(p.fixed_route->begin(), p.fixed_route->begin() + dp.k);
    if (!covered(dp.route))
      fail(Errc::no_data, "fixed route has segments without historical data");
  } else {
    // walks through unobserved segments are useless for learning; redraw
    int tries = 0;
    for (;;) {
      dp.route = net.random_walk_route(rng, static_cast<std::size_t>(dp.k));
      if (covered(dp.route)) break;
      if (++tries >= p.route_retries)
        fail(Errc::no_data, "could not find a walk covered by historical data");
    }
  }

  dp.smd = 0.0;
  dp.smn = 0.0;
  for (std::uint32_t seg : dp.route) {
    dp.smd += hist.median(seg);
    dp.smn += hist.mean(seg);
  }

  // h synthetic route traversals, each summing one historical draw per segment
  std::vector<double> sums(static_cast<std::size_t>(p.h), 0.0);
  for (std::uint32_t seg : dp.route) {
    const std::vector<double>& pool = hist.samples(seg);
    for (double& s : sums) s += pool[uniform_index(rng, pool.size())];
  }
  dp.true_median = median_of(std::move(sums));
  dp.w_opt = grid_search_weight(dp.smd, dp.smn, dp.true_median, p.grid_step);
  return dp;
}

std::vector<WeightDataPoint> generate_datapoints(const RoadNetwork& net,
                                                 const SegmentHistory& hist, const LearnParams& p,
                                                 std::uint64_t seed) {
  if (p.n_points < 1) fail(Errc::invalid_argument, "n_points must be >= 1");
  std::vector<WeightDataPoint> points;
  points.reserve(static_cast<std::size_t>(p.n_points));
  for (int i = 0; i < p.n_points; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    points.push_back(generate_datapoint(net, hist, p, rng));
  }
  return points;
}

WeightFunction::WeightFunction(FitMode mode, std::map<int, double> table, int k_max)
    : mode_(mode), table_(std::move(table)), k_max_(k_max) {
  for (auto& [k, w] : table_) {
    if (k < 1) fail(Errc::invalid_argument, "weight table key must be >= 1");
    if (w < 0.0 || w > 1.0) fail(Errc::invalid_argument, "weight outside [0,1]");
  }
  table_.emplace(1, 0.0);  // anchor, no effect when a k=1 entry exists
  if (k_max_ < 1) k_max_ = table_.rbegin()->first;
}

double WeightFunction::eval(int k) const {
  if (table_.empty()) fail(Errc::invalid_argument, "empty weight function");
  if (k < 1) fail(Errc::invalid_argument, "k must be >= 1");
  const auto clamp01 = [](double w) { return w < 0.0 ? 0.0 : (w > 1.0 ? 1.0 : w); };

  auto it = table_.find(k);
  if (it != table_.end()) return clamp01(it->second);
  // first entry with key > k
  auto hi = table_.upper_bound(k);
  if (hi == table_.end()) return clamp01(table_.rbegin()->second);  // past the table: hold last
  if (hi == table_.begin()) return clamp01(hi->second);             // below the table
  auto lo = std::prev(hi);
  const double span = static_cast<double>(hi->first - lo->first);
  const double t = static_cast<double>(k - lo->first) / span;
  return clamp01(lo->second + t * (hi->second - lo->second));
}

WeightFunction fit_weight_function(const std::vector<WeightDataPoint>& points, FitMode mode,
                                   int bandwidth) {
  if (points.empty()) fail(Errc::invalid_argument, "no data points to fit");
  if (bandwidth < 0) fail(Errc::invalid_argument, "bandwidth must be >= 0");

  std::map<int, double> sum;
  std::map<int, std::uint64_t> count;
  int k_max = 1;
  for (const WeightDataPoint& dp : points) {
    if (dp.k < 1) fail(Errc::invalid_argument, "data point with k < 1");
    sum[dp.k] += dp.w_opt;
    count[dp.k] += 1;
    k_max = std::max(k_max, dp.k);
  }

  std::map<int, double> raw;
  for (auto& [k, s] : sum) {
    double w = s / static_cast<double>(count[k]);
    raw[k] = std::clamp(w, 0.0, 1.0);
  }
  raw[1] = 0.0;

  std::vector<int> gaps;
  for (int k = 1; k <= k_max; ++k)
    if (!raw.count(k)) gaps.push_back(k);

  if (mode == FitMode::table) {
    WeightFunction wf(FitMode::table, std::move(raw), k_max);
    wf.set_gaps(std::move(gaps));
    wf.set_point_counts(std::move(count));
    return wf;
  }

  // smoothed mode: fill gaps by interpolation, then average locally
  WeightFunction filled(FitMode::table, raw, k_max);
  std::vector<double> dense(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = 1; k <= k_max; ++k) dense[static_cast<std::size_t>(k)] = filled.eval(k);

  std::map<int, double> smooth;
  for (int k = 1; k <= k_max; ++k) {
    const int lo = std::max(1, k - bandwidth);
    const int hi = std::min(k_max, k + bandwidth);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += dense[static_cast<std::size_t>(j)];
    smooth[k] = std::clamp(s / static_cast<double>(hi - lo + 1), 0.0, 1.0);
  }
  smooth[1] = 0.0;
  WeightFunction wf(FitMode::smoothed, std::move(smooth), k_max);
  wf.set_gaps(std::move(gaps));
  wf.set_point_counts(std::move(count));
  return wf;
}

void WeightFunction::save(const std::string& path, const std::string& params_comment) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  out << "# mode " << (mode_ == FitMode::smoothed ? "smoothed" : "table") << "\n";
  out << "# k_max " << k_max_ << "\n";
  if (!params_comment.empty()) out << "# " << params_comment << "\n";
  out << "# columns k\tw_k\n";
  for (const auto& [k, w] : table_) out << k << '\t' << fmt_double(w) << '\n';
  if (!out) fail(Errc::io, "write error on '" + path + "'");
}

WeightFunction WeightFunction::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open weights file '" + path + "'");
  FitMode mode = FitMode::table;
  int k_max = 0;
  std::map<int, double> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("# mode smoothed") == 0) mode = FitMode::smoothed;
      const std::string k_max_tag = "# k_max ";
      if (line.compare(0, k_max_tag.size(), k_max_tag) == 0)
        k_max = static_cast<int>(parse_int(line.substr(k_max_tag.size())));
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": expected k<TAB>w");
    const int k = static_cast<int>(parse_int(line.substr(0, tab)));
    const double w = parse_double(line.substr(tab + 1));
    if (k < 1 || w < 0.0 || w > 1.0)
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": value out of range");
    if (!table.emplace(k, w).second)
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": duplicate k");
  }
  if (in.bad()) fail(Errc::io, "read error on '" + path + "'");
  if (table.empty()) fail(Errc::parse, "weights file '" + path + "' has no entries");
  return WeightFunction(mode, std::move(table), k_max);
}

}  // namespace ttp
