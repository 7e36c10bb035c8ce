#include "ttp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "format.hpp"
#include "ttp/timeutil.hpp"

namespace ttp {

void ErrAccum::add(double predicted, double actual, double length_m) {
  if (!(length_m > 0.0)) fail(Errc::invalid_argument, "trip length must be > 0");
  const double err = predicted - actual;
  const double len_km = length_m / 1000.0;
  ++m_;
  abs_sum_ += std::abs(err);
  sq_sum_ += err * err;
  abs_over_len_sum_ += std::abs(err) / len_km;
  len_km_sum_ += len_km;
}

double ErrAccum::mae() const {
  if (m_ == 0) fail(Errc::invalid_argument, "no predictions accumulated");
  return abs_sum_ / static_cast<double>(m_);
}

MetricReport ErrAccum::report(double baseline_mae) const {
  if (m_ == 0) fail(Errc::invalid_argument, "no predictions accumulated");
  MetricReport r;
  r.m = m_;
  r.mae = abs_sum_ / static_cast<double>(m_);
  r.mse = sq_sum_ / static_cast<double>(m_);
  r.rmse = std::sqrt(r.mse);
  r.mae_star = abs_over_len_sum_;
  r.mae_star_identity = static_cast<double>(m_) * r.mae / len_km_sum_;
  if (baseline_mae == 0.0 && r.mae == 0.0) {
    r.relative_mae = 1.0;  // both perfect: identical, not undefined
  } else {
    r.relative_mae = r.mae / baseline_mae;
  }
  return r;
}

MetricReport compute_metrics(const std::vector<PredictionRecord>& preds,
                             const std::vector<PredictionRecord>& baseline) {
  if (preds.empty()) fail(Errc::invalid_argument, "no predictions");
  if (preds.size() != baseline.size())
    fail(Errc::invalid_argument, "prediction and baseline counts differ");
  ErrAccum a, b;
  for (const PredictionRecord& p : preds) a.add(p.predicted, p.actual, p.length_m);
  for (const PredictionRecord& p : baseline) b.add(p.predicted, p.actual, p.length_m);
  return a.report(b.mae());
}

namespace {

struct GroupAccum {
  std::map<Method, ErrAccum> acc;
};

GroupMetrics finish_group(int key, const GroupAccum& g) {
  GroupMetrics out;
  out.key = key;
  const auto smn = g.acc.find(Method::SMN);
  if (smn == g.acc.end()) fail(Errc::internal, "baseline accumulator missing");
  const double baseline_mae = smn->second.mae();
  for (const auto& [method, acc] : g.acc) out.by_method[method] = acc.report(baseline_mae);
  return out;
}

std::string dat_cell(double v) { return fmt_double_fixed(v, 6); }

void write_month_table(const std::string& path, const std::vector<GroupMetrics>& months,
                       const std::vector<Method>& columns) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  // month keys are yyyymm; print mm alone when a single year is covered
  bool one_year = true;
  for (const GroupMetrics& g : months)
    if (g.key / 100 != months.front().key / 100) one_year = false;
  out << "mn";
  for (Method m : columns) out << '\t' << method_name(m);
  out << '\n';
  for (const GroupMetrics& g : months) {
    out << (one_year ? g.key % 100 : g.key);
    for (Method m : columns) out << '\t' << dat_cell(g.by_method.at(m).relative_mae);
    out << '\n';
  }
  if (!out) fail(Errc::io, "write error on '" + path + "'");
}

void write_per_k_table(const std::string& path, const std::vector<GroupMetrics>& per_k,
                       const std::vector<Method>& columns) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  out << "kk";
  for (Method m : columns) out << '\t' << method_name(m);
  out << '\n';
  for (const GroupMetrics& g : per_k) {
    out << g.key;
    for (Method m : columns) out << '\t' << dat_cell(g.by_method.at(m).mae);
    out << '\n';
  }
  if (!out) fail(Errc::io, "write error on '" + path + "'");
}

}  // namespace

ProtocolResult run_protocol(const RoadNetwork& net, const std::vector<Trip>& trips,
                            const WeightFunction* wf, const ProtocolConfig& cfg) {
  if (!(cfg.train_from < cfg.train_to)) fail(Errc::invalid_argument, "empty training range");
  if (!(cfg.test_from < cfg.test_to)) fail(Errc::invalid_argument, "empty test range");
  if (cfg.deltas_min.empty()) fail(Errc::invalid_argument, "no discretization steps given");
  if (cfg.methods.empty()) fail(Errc::invalid_argument, "no methods requested");

  std::set<Method> wanted(cfg.methods.begin(), cfg.methods.end());
  wanted.insert(Method::SMN);  // baseline is always computed
  wanted.insert(Method::SMD);
  const bool want_com = wanted.count(Method::COM) != 0;
  const bool want_med = wanted.count(Method::MED) != 0;
  if (want_com && wf == nullptr)
    fail(Errc::invalid_argument, "combined method requested without a weight function");
  if (want_med && !cfg.fixed_route)
    fail(Errc::invalid_argument, "whole-route median method requires a fixed route");
  if (cfg.fixed_route && !net.is_connected_route(*cfg.fixed_route))
    fail(Errc::invalid_argument, "fixed route is not connected");

  const bool fixed_mode = cfg.fixed_route.has_value();
  const Route& fixed = fixed_mode ? *cfg.fixed_route : Route{};
  const int K = fixed_mode ? static_cast<int>(fixed.size()) : 0;

  std::ofstream dump;
  if (!cfg.dump_predictions.empty()) {
    dump.open(cfg.dump_predictions, std::ios::trunc);
    if (!dump) fail(Errc::io, "cannot open '" + cfg.dump_predictions + "' for writing");
    dump << "#trip_id\tk\tmethod\tpredicted_s\tactual_s\tlength_m\tprovenance\n";
  }

  ProtocolResult result;

  for (int delta : cfg.deltas_min) {
    const TimeGrid grid{delta, cfg.origin};
    DeltaReport rep;
    rep.delta_min = delta;

    // Statistics accumulate over the declared ranges only. Window arithmetic
    // already prevents leakage; the filter keeps the run from touching trips
    // outside the protocol.
    StatsStore store(net, grid, cfg.lookback);
    for (const Trip& t : trips) {
      const bool in_train = t.end_ts >= cfg.train_from && t.end_ts < cfg.train_to;
      const bool in_test = t.end_ts >= cfg.test_from && t.end_ts < cfg.test_to;
      if (in_train || in_test) store.add_trip(t);
    }
    store.finalize();
    store.set_historical_range(cfg.train_from, cfg.train_to);

    // Whole-trip time history per route prefix, for the exact-route median.
    RouteHistory route_hist(grid, cfg.lookback);
    std::vector<Route> prefixes;
    if (fixed_mode) {
      prefixes.reserve(static_cast<std::size_t>(K));
      for (int k = 1; k <= K; ++k)
        prefixes.emplace_back(fixed.begin(), fixed.begin() + k);
      for (const Trip& t : trips) {
        const bool eligible = (t.end_ts >= cfg.train_from && t.end_ts < cfg.train_to) ||
                              (t.end_ts >= cfg.test_from && t.end_ts < cfg.test_to);
        if (!eligible || t.k() != K || t.route() != fixed) continue;
        // each prefix acts as a virtual trip ending when its last segment does
        double prefix_sum = 0.0;
        for (int k = 1; k <= K; ++k) {
          prefix_sum += t.traversals[static_cast<std::size_t>(k - 1)].seconds;
          const std::int64_t vend = t.start_ts + std::llround(prefix_sum);
          route_hist.add(prefixes[static_cast<std::size_t>(k - 1)], grid.window_of(vend),
                         prefix_sum);
        }
      }
      route_hist.finalize();
      route_hist.set_historical_range(cfg.train_from, cfg.train_to);
    }

    std::map<int, GroupAccum> groups;  // month key, or k in fixed mode
    GroupAccum overall;

    for (const Trip& trip : trips) {
      if (trip.start_ts < cfg.test_from || trip.start_ts >= cfg.test_to) continue;
      if (fixed_mode && (trip.k() != K || trip.route() != fixed)) continue;

      const auto pw = prediction_window(grid, trip);
      if (!pw) {
        ++rep.skipped_no_prior_window;
        continue;
      }
      const std::int64_t j = *pw;
      const std::int64_t start_window = j + 1;

      if (!fixed_mode) {
        const Route route = trip.route();
        RouteEstimates est;
        try {
          est = gather_route_estimates(store, route, j);
        } catch (const Error& e) {
          if (e.code() == Errc::no_data) {
            ++rep.skipped_no_data;
            continue;
          }
          throw;
        }
        const double actual = trip.total_seconds();
        const double length = net.route_length_m(route);
        const double com =
            want_com ? combine(est.smd, est.smn, wf->eval(est.k)) : 0.0;

        if (cfg.audit) {
          ++result.audit.checked;
          if (est.max_window >= start_window) ++result.audit.violations;
        }

        GroupAccum& group = groups[month_key(trip.start_ts)];
        for (Method m : wanted) {
          double value = 0.0;
          if (m == Method::SMD) value = est.smd;
          else if (m == Method::SMN) value = est.smn;
          else if (m == Method::COM) value = com;
          else continue;  // MED not defined network-wide
          group.acc[m].add(value, actual, length);
          overall.acc[m].add(value, actual, length);
          if (dump.is_open()) {
            RoutePrediction p{m, value, est.k, est.prov, est.max_window};
            dump << format_prediction_row(trip.id, p, actual, length) << '\n';
          }
        }
        ++rep.trips_evaluated;
        continue;
      }

      // fixed-route mode: every prefix length is its own measurement
      RouteEstimates full;
      try {
        full = gather_route_estimates(store, fixed, j);
      } catch (const Error& e) {
        if (e.code() == Errc::no_data) {
          ++rep.skipped_no_data;
          continue;
        }
        throw;
      }
      // per-segment estimates are identical across prefixes (same window), so
      // prefix sums of medians/means give every k at once
      std::vector<double> smd_prefix(static_cast<std::size_t>(K));
      std::vector<double> smn_prefix(static_cast<std::size_t>(K));
      std::vector<std::int64_t> win_prefix(static_cast<std::size_t>(K));
      {
        double smd = 0.0, smn = 0.0;
        std::int64_t maxw = std::numeric_limits<std::int64_t>::min();
        for (int k = 1; k <= K; ++k) {
          const Estimate e = store.estimate(fixed[static_cast<std::size_t>(k - 1)], j);
          smd += e.median;
          smn += e.mean;
          maxw = std::max(maxw, e.window);
          smd_prefix[static_cast<std::size_t>(k - 1)] = smd;
          smn_prefix[static_cast<std::size_t>(k - 1)] = smn;
          win_prefix[static_cast<std::size_t>(k - 1)] = maxw;
        }
      }

      std::int64_t consulted = win_prefix[static_cast<std::size_t>(K - 1)];
      double actual_prefix = 0.0;
      double length_prefix = 0.0;
      for (int k = 1; k <= K; ++k) {
        actual_prefix += trip.traversals[static_cast<std::size_t>(k - 1)].seconds;
        length_prefix += net.segment(fixed[static_cast<std::size_t>(k - 1)]).length_m;

        std::optional<Estimate> med;
        if (want_med) {
          med = route_hist.median_estimate(prefixes[static_cast<std::size_t>(k - 1)], j);
          if (!med) continue;  // keep method sets comparable: skip this (trip, k)
          consulted = std::max(consulted, med->window);
        }
        const double smd = smd_prefix[static_cast<std::size_t>(k - 1)];
        const double smn = smn_prefix[static_cast<std::size_t>(k - 1)];
        GroupAccum& group = groups[k];
        for (Method m : wanted) {
          double value = 0.0;
          if (m == Method::SMD) value = smd;
          else if (m == Method::SMN) value = smn;
          else if (m == Method::COM) value = combine(smd, smn, wf->eval(k));
          else value = med->median;
          group.acc[m].add(value, actual_prefix, length_prefix);
          overall.acc[m].add(value, actual_prefix, length_prefix);
          if (dump.is_open() && k == K) {
            RoutePrediction p{m, value, K, full.prov, consulted};
            dump << format_prediction_row(trip.id, p, actual_prefix, length_prefix) << '\n';
          }
        }
      }
      if (cfg.audit) {
        ++result.audit.checked;
        if (consulted >= start_window) ++result.audit.violations;
      }
      ++rep.trips_evaluated;
    }

    if (!overall.acc.empty()) {
      const double baseline = overall.acc.at(Method::SMN).mae();
      for (const auto& [m, acc] : overall.acc) rep.overall[m] = acc.report(baseline);
    }
    for (const auto& [key, group] : groups) {
      if (fixed_mode) rep.per_k.push_back(finish_group(key, group));
      else rep.months.push_back(finish_group(key, group));
    }

    if (!cfg.out_dir.empty() && !groups.empty()) {
      std::vector<Method> columns;
      columns.push_back(Method::SMN);
      columns.push_back(Method::SMD);
      if (fixed_mode) {
        if (want_med) columns.push_back(Method::MED);
        if (want_com) columns.push_back(Method::COM);
        write_per_k_table(cfg.out_dir + "/route_k_mae_d" + std::to_string(delta) + ".dat",
                          rep.per_k, columns);
      } else {
        if (want_com) columns.push_back(Method::COM);
        write_month_table(cfg.out_dir + "/month_rel_mae_d" + std::to_string(delta) + ".dat",
                          rep.months, columns);
      }
    }

    result.deltas.push_back(std::move(rep));
  }
  return result;
}

}  // namespace ttp
