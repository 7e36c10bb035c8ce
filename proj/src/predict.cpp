#include "ttp/predict.hpp"

#include <algorithm>
#include <limits>

#include "format.hpp"
#include "ttp/summary.hpp"

namespace ttp {

const char* method_name(Method m) {
  switch (m) {
    case Method::SMD: return "SMD";
    case Method::SMN: return "SMN";
    case Method::COM: return "COM";
    case Method::MED: return "MED";
  }
  return "?";
}

std::optional<Method> method_from_string(const std::string& s) {
  if (s == "SMD" || s == "smd") return Method::SMD;
  if (s == "SMN" || s == "smn") return Method::SMN;
  if (s == "COM" || s == "com") return Method::COM;
  if (s == "MED" || s == "med") return Method::MED;
  return std::nullopt;
}

RouteEstimates gather_route_estimates(const StatsStore& store, const Route& route,
                                      std::int64_t window) {
  if (route.empty()) fail(Errc::invalid_argument, "empty route");
  RouteEstimates out;
  out.k = static_cast<int>(route.size());
  out.max_window = std::numeric_limits<std::int64_t>::min();
  for (std::uint32_t seg : route) {
    const Estimate e = store.estimate(seg, window);
    out.smd += e.median;
    out.smn += e.mean;
    out.max_window = std::max(out.max_window, e.window);
    switch (e.provenance) {
      case Provenance::fresh: ++out.prov.fresh; break;
      case Provenance::stale: ++out.prov.stale; break;
      case Provenance::historical: ++out.prov.historical; break;
    }
  }
  return out;
}

double combine(double smd, double smn, double w) {
  const double wc = std::clamp(w, 0.0, 1.0);
  return (1.0 - wc) * smd + wc * smn;
}

RoutePrediction predict_smd(const StatsStore& store, const Route& route, std::int64_t window) {
  const RouteEstimates e = gather_route_estimates(store, route, window);
  return RoutePrediction{Method::SMD, e.smd, e.k, e.prov, e.max_window};
}

RoutePrediction predict_smn(const StatsStore& store, const Route& route, std::int64_t window) {
  const RouteEstimates e = gather_route_estimates(store, route, window);
  return RoutePrediction{Method::SMN, e.smn, e.k, e.prov, e.max_window};
}

RoutePrediction predict_com(const StatsStore& store, const Route& route, std::int64_t window,
                            const WeightFunction& wf) {
  const RouteEstimates e = gather_route_estimates(store, route, window);
  const double w = wf.eval(e.k);
  return RoutePrediction{Method::COM, combine(e.smd, e.smn, w), e.k, e.prov, e.max_window};
}

RouteHistory::RouteHistory(TimeGrid grid, int lookback) : grid_(grid), lookback_(lookback) {
  if (lookback < 0) fail(Errc::invalid_argument, "lookback must be >= 0");
}

void RouteHistory::add(const Route& route, std::int64_t window, double seconds) {
  routes_[route].windows[window].samples.push_back(seconds);
}

void RouteHistory::add_trip(const Trip& trip) {
  add(trip.route(), estimation_window(grid_, trip), trip.total_seconds());
}

void RouteHistory::finalize() {
  for (auto& [route, pr] : routes_) {
    for (auto& [w, cell] : pr.windows) {
      std::sort(cell.samples.begin(), cell.samples.end());
      cell.median = median_sorted(cell.samples);
    }
  }
}

void RouteHistory::set_historical_range(std::int64_t from_ts, std::int64_t to_ts) {
  if (!(from_ts < to_ts)) fail(Errc::invalid_argument, "empty historical range");
  std::int64_t w_from = grid_.window_of(from_ts);
  if (grid_.window_start(w_from) < from_ts) ++w_from;
  std::int64_t w_to = grid_.window_of(to_ts);
  if (grid_.window_start(w_to) + grid_.delta_s() <= to_ts) ++w_to;
  if (w_from >= w_to) fail(Errc::invalid_argument, "historical range narrower than one window");
  hist_upper_ = w_to - 1;
  hist_upper_set_ = true;
  for (auto& [route, pr] : routes_) {
    std::vector<double> pool;
    for (auto& [w, cell] : pr.windows)
      if (w >= w_from && w < w_to) pool.insert(pool.end(), cell.samples.begin(), cell.samples.end());
    if (pool.empty()) {
      pr.has_hist = false;
      continue;
    }
    std::sort(pool.begin(), pool.end());
    pr.hist.median = median_sorted(pool);
    pr.hist.samples = std::move(pool);
    pr.has_hist = true;
  }
}

std::optional<Estimate> RouteHistory::median_estimate(const Route& route,
                                                      std::int64_t window) const {
  auto it = routes_.find(route);
  if (it == routes_.end()) return std::nullopt;
  const PerRoute& pr = it->second;
  const auto hit = [&](std::int64_t w) -> const Cell* {
    auto wit = pr.windows.find(w);
    return wit == pr.windows.end() ? nullptr : &wit->second;
  };
  if (const Cell* c = hit(window))
    return Estimate{0.0, c->median, c->samples.size(), Provenance::fresh, window};
  for (int back = 1; back <= lookback_; ++back) {
    if (const Cell* c = hit(window - back))
      return Estimate{0.0, c->median, c->samples.size(), Provenance::stale, window - back};
  }
  if (pr.has_hist && hist_upper_set_ && hist_upper_ <= window)
    return Estimate{0.0, pr.hist.median, pr.hist.samples.size(), Provenance::historical,
                    hist_upper_};
  return std::nullopt;
}

std::optional<RoutePrediction> predict_med(const RouteHistory& hist, const Route& route,
                                           std::int64_t window) {
  const auto est = hist.median_estimate(route, window);
  if (!est) return std::nullopt;
  RoutePrediction pred;
  pred.method = Method::MED;
  pred.seconds = est->median;
  pred.k = static_cast<int>(route.size());
  pred.max_window = est->window;
  switch (est->provenance) {
    case Provenance::fresh: pred.prov.fresh = 1; break;
    case Provenance::stale: pred.prov.stale = 1; break;
    case Provenance::historical: pred.prov.historical = 1; break;
  }
  return pred;
}

std::size_t choose_route(const std::vector<Route>& candidates,
                         const std::function<std::optional<double>(const Route&)>& predictor) {
  if (candidates.empty()) fail(Errc::invalid_argument, "no candidate routes");
  std::size_t best = candidates.size();
  double best_time = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto t = predictor(candidates[i]);
    if (!t) continue;
    if (best == candidates.size() || *t < best_time) {  // strict: ties keep the first
      best = i;
      best_time = *t;
    }
  }
  if (best == candidates.size()) fail(Errc::no_data, "no candidate could be predicted");
  return best;
}

std::string format_prediction_row(const std::string& trip_id, const RoutePrediction& pred,
                                  double actual_s, double length_m) {
  std::string row = trip_id;
  row += '\t';
  row += std::to_string(pred.k);
  row += '\t';
  row += method_name(pred.method);
  row += '\t';
  row += fmt_double(pred.seconds);
  row += '\t';
  row += fmt_double(actual_s);
  row += '\t';
  row += fmt_double(length_m);
  row += "\tfresh:";
  row += std::to_string(pred.prov.fresh);
  row += ",stale:";
  row += std::to_string(pred.prov.stale);
  row += ",historical:";
  row += std::to_string(pred.prov.historical);
  return row;
}

}  // namespace ttp
