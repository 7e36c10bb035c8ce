#include "ttp/ttp.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <iterator>
#include <string>

#include "ttp/error.hpp"
#include "ttp/eval.hpp"
#include "ttp/network.hpp"
#include "ttp/predict.hpp"
#include "ttp/stats.hpp"
#include "ttp/synth.hpp"
#include "ttp/timeutil.hpp"
#include "ttp/trips.hpp"
#include "ttp/weights.hpp"

struct ttp_network {
  ttp::RoadNetwork net;
};
struct ttp_trips {
  std::vector<ttp::Trip> trips;
};
struct ttp_stats {
  ttp::StatsStore store;
};
struct ttp_weights {
  ttp::WeightFunction wf;
};

namespace {

thread_local std::string g_last_error;

int errc_to_code(ttp::Errc c) {
  switch (c) {
    case ttp::Errc::invalid_argument: return TTP_ERR_INVALID_ARGUMENT;
    case ttp::Errc::io: return TTP_ERR_IO;
    case ttp::Errc::parse: return TTP_ERR_PARSE;
    case ttp::Errc::no_data: return TTP_ERR_NO_DATA;
    case ttp::Errc::infeasible: return TTP_ERR_INFEASIBLE;
    case ttp::Errc::internal: return TTP_ERR_INTERNAL;
  }
  return TTP_ERR_INTERNAL;
}

// runs fn inside the exception barrier every entry point needs
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return TTP_OK;
  } catch (const ttp::Error& e) {
    g_last_error = e.what();
    return errc_to_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TTP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TTP_ERR_INTERNAL;
  }
}

int require(bool cond, const char* message) {
  if (cond) return TTP_OK;
  g_last_error = message;
  return TTP_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ttp_version(void) { return "0.1.0"; }

const char* ttp_last_error(void) { return g_last_error.c_str(); }

int ttp_parse_timestamp(const char* text, int64_t* out) {
  if (int rc = require(text && out, "text and out must not be NULL")) return rc;
  return guarded([&] { *out = ttp::parse_timestamp(text); });
}

/* ---- network ---- */

int ttp_network_load(const char* path, ttp_network** out) {
  if (int rc = require(path && out, "path and out must not be NULL")) return rc;
  return guarded([&] { *out = new ttp_network{ttp::load_network(path)}; });
}

int ttp_network_save(const ttp_network* net, const char* path) {
  if (int rc = require(net && path, "net and path must not be NULL")) return rc;
  return guarded([&] { ttp::save_network(net->net, path); });
}

int ttp_network_segment_count(const ttp_network* net, size_t* out) {
  if (int rc = require(net && out, "net and out must not be NULL")) return rc;
  *out = net->net.size();
  return TTP_OK;
}

int ttp_network_total_length_m(const ttp_network* net, double* out) {
  if (int rc = require(net && out, "net and out must not be NULL")) return rc;
  *out = net->net.total_length_m();
  return TTP_OK;
}

void ttp_network_free(ttp_network* net) { delete net; }

/* ---- synthetic data ---- */

int ttp_synth_run(const char* config_path, int has_seed_override, uint64_t seed_override,
                  const char* out_net_path, const char* out_trips_path, ttp_synth_summary* out) {
  if (int rc = require(config_path, "config_path must not be NULL")) return rc;
  return guarded([&] {
    ttp::SynthConfig cfg = ttp::load_synth_config(config_path);
    if (has_seed_override) cfg.seed = seed_override;
    ttp::Rng net_rng(ttp::mix_seed(cfg.seed, 0));
    const ttp::RoadNetwork net = ttp::generate_network(cfg, net_rng);
    const std::vector<ttp::Trip> trips = ttp::generate_trips(net, cfg, cfg.seed);
    if (out_net_path) ttp::save_network(net, out_net_path);
    if (out_trips_path) ttp::save_trips(trips, net, out_trips_path);
    if (out) {
      out->segments = net.size();
      out->trips = trips.size();
    }
  });
}

/* ---- trips ---- */

int ttp_trips_load(const char* path, const ttp_network* net, const char* rejects_path,
                   ttp_trips** out, uint64_t* accepted, uint64_t* rejected) {
  if (int rc = require(path && net && out, "path, net, and out must not be NULL")) return rc;
  return guarded([&] {
    ttp::TripParseResult result = ttp::parse_trips(path, net->net);
    if (rejects_path) ttp::write_rejects(result.rejects, rejects_path);
    if (accepted) *accepted = result.trips.size();
    if (rejected) *rejected = result.rejects.size();
    *out = new ttp_trips{std::move(result.trips)};
  });
}

void ttp_trips_free(ttp_trips* trips) { delete trips; }

/* ---- weights ---- */

int ttp_weights_learn(const ttp_network* net, const ttp_trips* trips,
                      const ttp_learn_params* params, ttp_weights** out) {
  if (int rc = require(net && trips && params && out, "all arguments must not be NULL")) return rc;
  return guarded([&] {
    const ttp::SegmentHistory hist =
        ttp::SegmentHistory::from_trips(net->net, trips->trips, params->train_from,
                                        params->train_to, params->hour_from, params->hour_to);
    ttp::LearnParams lp;
    lp.k_max = params->k_max;
    lp.h = params->h;
    lp.n_points = params->n_points;
    lp.grid_step = params->grid_step;
    if (params->fixed_route)
      lp.fixed_route = ttp::resolve_route_spec(net->net, params->fixed_route);
    const auto points = ttp::generate_datapoints(net->net, hist, lp, params->seed);
    const auto mode = params->smoothed ? ttp::FitMode::smoothed : ttp::FitMode::table;
    const int bandwidth = params->bandwidth > 0 ? params->bandwidth : 3;
    *out = new ttp_weights{ttp::fit_weight_function(points, mode, bandwidth)};
  });
}

int ttp_weights_save(const ttp_weights* wf, const char* path) {
  if (int rc = require(wf && path, "wf and path must not be NULL")) return rc;
  return guarded([&] { wf->wf.save(path); });
}

int ttp_weights_load(const char* path, ttp_weights** out) {
  if (int rc = require(path && out, "path and out must not be NULL")) return rc;
  return guarded([&] { *out = new ttp_weights{ttp::WeightFunction::load(path)}; });
}

int ttp_weights_eval(const ttp_weights* wf, int k, double* out) {
  if (int rc = require(wf && out, "wf and out must not be NULL")) return rc;
  return guarded([&] { *out = wf->wf.eval(k); });
}

int ttp_weights_entry_count(const ttp_weights* wf, size_t* out) {
  if (int rc = require(wf && out, "wf and out must not be NULL")) return rc;
  *out = wf->wf.table().size();
  return TTP_OK;
}

int ttp_weights_entry(const ttp_weights* wf, size_t index, int* k, double* w, uint64_t* points) {
  if (int rc = require(wf, "wf must not be NULL")) return rc;
  const auto& table = wf->wf.table();
  if (int rc = require(index < table.size(), "entry index out of range")) return rc;
  auto it = table.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(index));
  if (k) *k = it->first;
  if (w) *w = it->second;
  if (points) {
    const auto& counts = wf->wf.point_counts();
    const auto cit = counts.find(it->first);
    *points = cit == counts.end() ? 0 : cit->second;
  }
  return TTP_OK;
}

void ttp_weights_free(ttp_weights* wf) { delete wf; }

/* ---- stats ---- */

int ttp_stats_build(const ttp_network* net, const ttp_trips* trips, int delta_min, int64_t origin,
                    int lookback, int has_hist, int64_t hist_from, int64_t hist_to,
                    ttp_stats** out) {
  if (int rc = require(net && trips && out, "net, trips, and out must not be NULL")) return rc;
  return guarded([&] {
    ttp::StatsStore store =
        ttp::accumulate(net->net, trips->trips, ttp::TimeGrid{delta_min, origin}, lookback);
    if (has_hist) store.set_historical_range(hist_from, hist_to);
    *out = new ttp_stats{std::move(store)};
  });
}

int ttp_stats_save(const ttp_stats* stats, const char* path) {
  if (int rc = require(stats && path, "stats and path must not be NULL")) return rc;
  return guarded([&] { stats->store.save(path); });
}

int ttp_stats_load(const char* path, const ttp_network* net, ttp_stats** out) {
  if (int rc = require(path && net && out, "path, net, and out must not be NULL")) return rc;
  return guarded([&] { *out = new ttp_stats{ttp::StatsStore::load(path, net->net)}; });
}

void ttp_stats_free(ttp_stats* stats) { delete stats; }

/* ---- prediction ---- */

int ttp_predict_route(const ttp_network* net, const ttp_stats* stats, const ttp_weights* weights,
                      const char* route_spec, int64_t at_ts, ttp_prediction* out) {
  if (int rc = require(net && stats && route_spec && out,
                       "net, stats, route_spec, and out must not be NULL"))
    return rc;
  return guarded([&] {
    const ttp::Route route = ttp::resolve_route_spec(net->net, route_spec);
    const ttp::TimeGrid& grid = stats->store.grid();
    ttp::Trip probe;
    probe.start_ts = at_ts;
    const auto window = ttp::prediction_window(grid, probe);
    if (!window)
      ttp::fail(ttp::Errc::no_data, "departure falls in the first grid window, no prior data");
    const ttp::RouteEstimates est = ttp::gather_route_estimates(stats->store, route, *window);
    const double w = weights ? weights->wf.eval(est.k) : 0.0;
    out->smd_s = est.smd;
    out->smn_s = est.smn;
    out->com_s = ttp::combine(est.smd, est.smn, w);
    out->weight = w;
    out->k = est.k;
    out->length_m = net->net.route_length_m(route);
    out->fresh = est.prov.fresh;
    out->stale = est.prov.stale;
    out->historical = est.prov.historical;
    out->window = *window;
  });
}

/* ---- evaluation ---- */

int ttp_evaluate_run(const ttp_network* net, const ttp_trips* trips, const ttp_weights* weights,
                     const ttp_eval_params* params, const char* out_dir, ttp_eval_summary* out) {
  if (int rc = require(net && trips && params, "net, trips, and params must not be NULL"))
    return rc;
  if (int rc = require(params->deltas_min && params->n_deltas > 0,
                       "at least one discretization step is required"))
    return rc;
  if (int rc = require(params->methods, "methods must not be NULL")) return rc;
  return guarded([&] {
    ttp::ProtocolConfig cfg;
    cfg.train_from = params->train_from;
    cfg.train_to = params->train_to;
    cfg.test_from = params->test_from;
    cfg.test_to = params->test_to;
    cfg.deltas_min.assign(params->deltas_min, params->deltas_min + params->n_deltas);
    cfg.lookback = params->lookback >= 0 ? params->lookback : 6;
    cfg.origin = params->origin;
    cfg.audit = params->audit != 0;
    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      cfg.out_dir = out_dir;
    }
    if (params->dump_predictions) cfg.dump_predictions = params->dump_predictions;
    if (params->fixed_route)
      cfg.fixed_route = ttp::resolve_route_spec(net->net, params->fixed_route);

    std::string methods(params->methods);
    std::size_t pos = 0;
    while (pos <= methods.size()) {
      std::size_t next = methods.find(',', pos);
      if (next == std::string::npos) next = methods.size();
      const std::string name = methods.substr(pos, next - pos);
      if (!name.empty()) {
        const auto m = ttp::method_from_string(name);
        if (!m) ttp::fail(ttp::Errc::invalid_argument, "unknown method '" + name + "'");
        cfg.methods.push_back(*m);
      }
      pos = next + 1;
    }
    if (cfg.methods.empty()) ttp::fail(ttp::Errc::invalid_argument, "no methods given");

    const ttp::ProtocolResult result =
        ttp::run_protocol(net->net, trips->trips, weights ? &weights->wf : nullptr, cfg);

    if (out) {
      out->trips_evaluated = 0;
      out->files_written = 0;
      for (const auto& rep : result.deltas) {
        out->trips_evaluated += rep.trips_evaluated;
        if (!cfg.out_dir.empty() && (!rep.months.empty() || !rep.per_k.empty()))
          ++out->files_written;
      }
      out->audit_checked = result.audit.checked;
      out->audit_violations = result.audit.violations;
    }
  });
}

}  // extern "C"
