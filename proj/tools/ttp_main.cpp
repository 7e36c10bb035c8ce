// Command-line front end. Talks to the library exclusively through the C
// interface in ttp/ttp.h.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttp/ttp.h"

namespace {

// exit codes: 0 success, 1 usage error, 2 data error
constexpr int kUsageError = 1;
constexpr int kDataError = 2;

int report_failure() {
  std::fprintf(stderr, "error: %s\n", ttp_last_error());
  return kDataError;
}

std::int64_t parse_ts_or_throw(const std::string& text, const std::string& flag) {
  std::int64_t out = 0;
  if (ttp_parse_timestamp(text.c_str(), &out) != TTP_OK)
    throw CLI::ValidationError(flag, "bad timestamp '" + text + "' (" + ttp_last_error() + ")");
  return out;
}

struct TsRange {
  std::int64_t from = 0;
  std::int64_t to = 0;
};

TsRange parse_range_or_throw(const std::string& text, const std::string& flag) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError(flag, "expected FROM,TO (half-open range)");
  TsRange r;
  r.from = parse_ts_or_throw(text.substr(0, comma), flag);
  r.to = parse_ts_or_throw(text.substr(comma + 1), flag);
  if (r.from >= r.to) throw CLI::ValidationError(flag, "range start must precede its end");
  return r;
}

// RAII wrappers over the opaque handles
struct NetworkHandle {
  ttp_network* ptr = nullptr;
  ~NetworkHandle() { ttp_network_free(ptr); }
};
struct TripsHandle {
  ttp_trips* ptr = nullptr;
  ~TripsHandle() { ttp_trips_free(ptr); }
};
struct StatsHandle {
  ttp_stats* ptr = nullptr;
  ~StatsHandle() { ttp_stats_free(ptr); }
};
struct WeightsHandle {
  ttp_weights* ptr = nullptr;
  ~WeightsHandle() { ttp_weights_free(ptr); }
};

int load_network(const std::string& path, NetworkHandle& net) {
  if (ttp_network_load(path.c_str(), &net.ptr) != TTP_OK) return report_failure();
  return 0;
}

// Loads trips and drops the rejection report next to the input file.
int load_trips(const std::string& path, const NetworkHandle& net, TripsHandle& trips,
               bool verbose = true) {
  uint64_t accepted = 0, rejected = 0;
  const std::string rejects = path + ".rejects";
  if (ttp_trips_load(path.c_str(), net.ptr, rejects.c_str(), &trips.ptr, &accepted, &rejected) !=
      TTP_OK)
    return report_failure();
  if (verbose)
    std::printf("trips: %" PRIu64 " accepted, %" PRIu64 " rejected (report: %s)\n", accepted,
                rejected, rejects.c_str());
  return 0;
}

struct SynthArgs {
  std::string config;
  std::string out_net;
  std::string out_trips;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

int run_synth(const SynthArgs& a) {
  ttp_synth_summary summary{};
  if (ttp_synth_run(a.config.c_str(), a.has_seed ? 1 : 0, a.seed,
                    a.out_net.empty() ? nullptr : a.out_net.c_str(),
                    a.out_trips.empty() ? nullptr : a.out_trips.c_str(), &summary) != TTP_OK)
    return report_failure();
  std::printf("segments: %" PRIu64 "\ntrips: %" PRIu64 "\n", summary.segments, summary.trips);
  return 0;
}

struct LearnArgs {
  std::string net;
  std::string trips;
  std::string train_range;
  std::string out;
  std::string route;
  std::string hours;
  std::string mode = "table";
  int k_max = 30;
  int h = 1000;
  int n_points = 10000;
  double grid_step = 0.01;
  int bandwidth = 3;
  std::uint64_t seed = 1;
};

int run_learn(const LearnArgs& a) {
  const TsRange train = parse_range_or_throw(a.train_range, "--train-range");
  int hour_from = -1, hour_to = -1;
  if (!a.hours.empty()) {
    const std::size_t comma = a.hours.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--hours", "expected FROM,TO hours of day");
    hour_from = std::stoi(a.hours.substr(0, comma));
    hour_to = std::stoi(a.hours.substr(comma + 1));
  }

  NetworkHandle net;
  if (int rc = load_network(a.net, net)) return rc;
  TripsHandle trips;
  if (int rc = load_trips(a.trips, net, trips)) return rc;

  ttp_learn_params params{};
  params.k_max = a.k_max;
  params.h = a.h;
  params.n_points = a.n_points;
  params.grid_step = a.grid_step;
  params.seed = a.seed;
  params.train_from = train.from;
  params.train_to = train.to;
  params.smoothed = a.mode == "smoothed" ? 1 : 0;
  params.bandwidth = a.bandwidth;
  params.fixed_route = a.route.empty() ? nullptr : a.route.c_str();
  params.hour_from = hour_from;
  params.hour_to = hour_to;

  WeightsHandle wf;
  if (ttp_weights_learn(net.ptr, trips.ptr, &params, &wf.ptr) != TTP_OK) return report_failure();

  size_t entries = 0;
  ttp_weights_entry_count(wf.ptr, &entries);
  for (size_t i = 0; i < entries; ++i) {
    int k = 0;
    double w = 0.0;
    uint64_t points = 0;
    ttp_weights_entry(wf.ptr, i, &k, &w, &points);
    std::printf("k=%d w=%.4f points=%" PRIu64 "\n", k, w, points);
  }
  if (ttp_weights_save(wf.ptr, a.out.c_str()) != TTP_OK) return report_failure();
  std::printf("weights written to %s\n", a.out.c_str());
  return 0;
}

struct StatsArgs {
  std::string net;
  std::string trips;
  std::string out;
  std::string hist_range;
  int delta = 10;
  std::string origin = "0";
  int lookback = 6;
};

int run_stats(const StatsArgs& a) {
  const std::int64_t origin = parse_ts_or_throw(a.origin, "--origin");
  TsRange hist{};
  const bool has_hist = !a.hist_range.empty();
  if (has_hist) hist = parse_range_or_throw(a.hist_range, "--hist-range");

  NetworkHandle net;
  if (int rc = load_network(a.net, net)) return rc;
  TripsHandle trips;
  if (int rc = load_trips(a.trips, net, trips)) return rc;

  StatsHandle stats;
  if (ttp_stats_build(net.ptr, trips.ptr, a.delta, origin, a.lookback, has_hist ? 1 : 0, hist.from,
                      hist.to, &stats.ptr) != TTP_OK)
    return report_failure();
  if (ttp_stats_save(stats.ptr, a.out.c_str()) != TTP_OK) return report_failure();
  std::printf("statistics written to %s\n", a.out.c_str());
  return 0;
}

struct EvaluateArgs {
  std::string net;
  std::string trips;
  std::string weights;
  std::string train_range;
  std::string test_range;
  std::string out_dir;
  std::string fixed_route;
  std::string dump_predictions;
  std::vector<int> deltas;
  std::string methods = "SMD,SMN,COM";
  int lookback = 6;
  std::string origin = "0";
  bool audit = false;
};

int run_evaluate(const EvaluateArgs& a) {
  const TsRange train = parse_range_or_throw(a.train_range, "--train-range");
  const TsRange test = parse_range_or_throw(a.test_range, "--test-range");
  const std::int64_t origin = parse_ts_or_throw(a.origin, "--origin");

  NetworkHandle net;
  if (int rc = load_network(a.net, net)) return rc;
  TripsHandle trips;
  if (int rc = load_trips(a.trips, net, trips)) return rc;
  WeightsHandle wf;
  if (!a.weights.empty() && ttp_weights_load(a.weights.c_str(), &wf.ptr) != TTP_OK)
    return report_failure();

  ttp_eval_params params{};
  params.train_from = train.from;
  params.train_to = train.to;
  params.test_from = test.from;
  params.test_to = test.to;
  params.deltas_min = a.deltas.data();
  params.n_deltas = a.deltas.size();
  params.methods = a.methods.c_str();
  params.fixed_route = a.fixed_route.empty() ? nullptr : a.fixed_route.c_str();
  params.lookback = a.lookback;
  params.origin = origin;
  params.audit = a.audit ? 1 : 0;
  params.dump_predictions = a.dump_predictions.empty() ? nullptr : a.dump_predictions.c_str();

  ttp_eval_summary summary{};
  if (ttp_evaluate_run(net.ptr, trips.ptr, wf.ptr, &params, a.out_dir.c_str(), &summary) != TTP_OK)
    return report_failure();
  std::printf("evaluated %" PRIu64 " trips across %zu discretization steps\n",
              summary.trips_evaluated, a.deltas.size());
  std::printf("report files: %" PRIu64 " (in %s)\n", summary.files_written, a.out_dir.c_str());
  if (a.audit)
    std::printf("audit: %" PRIu64 " predictions checked, %" PRIu64 " window violations\n",
                summary.audit_checked, summary.audit_violations);
  return 0;
}

struct PredictArgs {
  std::string net;
  std::string stats;
  std::string weights;
  std::string route;
  std::string at;
};

int run_predict(const PredictArgs& a) {
  const std::int64_t at_ts = parse_ts_or_throw(a.at, "--at");

  NetworkHandle net;
  if (int rc = load_network(a.net, net)) return rc;
  StatsHandle stats;
  if (ttp_stats_load(a.stats.c_str(), net.ptr, &stats.ptr) != TTP_OK) return report_failure();
  WeightsHandle wf;
  if (!a.weights.empty() && ttp_weights_load(a.weights.c_str(), &wf.ptr) != TTP_OK)
    return report_failure();

  ttp_prediction pred{};
  if (ttp_predict_route(net.ptr, stats.ptr, wf.ptr, a.route.c_str(), at_ts, &pred) != TTP_OK)
    return report_failure();

  std::printf("route: %s (k=%d, %.1f m)\n", a.route.c_str(), pred.k, pred.length_m);
  std::printf("window: %" PRId64 "\n", pred.window);
  std::printf("SMD %.3f s\n", pred.smd_s);
  std::printf("SMN %.3f s\n", pred.smn_s);
  std::printf("COM %.3f s (w=%.4f)\n", pred.com_s, pred.weight);
  std::printf("provenance: fresh=%d stale=%d historical=%d\n", pred.fresh, pred.stale,
              pred.historical);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Route travel time prediction from per-segment statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ttp_version());

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic network and trip dataset");
  synth_cmd->add_option("--config", synth.config, "key=value generator config")
      ->required()
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("--out-net", synth.out_net, "network file to write");
  synth_cmd->add_option("--out-trips", synth.out_trips, "trip file to write");
  auto* seed_opt = synth_cmd->add_option("--seed", synth.seed, "override the config seed");

  LearnArgs learn;
  auto* learn_cmd =
      app.add_subcommand("learn-weights", "Learn the route-length weight function from trips");
  // --h (synthetic trips per point) would clash with the -h help shorthand
  learn_cmd->set_help_flag("--help", "print help");
  learn_cmd->add_option("--net", learn.net, "network file")->required()->check(CLI::ExistingFile);
  learn_cmd->add_option("--trips", learn.trips, "trip file")->required()->check(CLI::ExistingFile);
  learn_cmd->add_option("--train-range", learn.train_range, "training range FROM,TO (half-open)")
      ->required();
  learn_cmd->add_option("--kmax", learn.k_max, "largest route length to learn");
  learn_cmd->add_option("--h", learn.h, "synthetic trips per data point");
  learn_cmd->add_option("--n-points", learn.n_points, "data points to generate");
  learn_cmd->add_option("--grid-step", learn.grid_step, "weight grid resolution");
  learn_cmd->add_option("--mode", learn.mode, "table or smoothed")
      ->check(CLI::IsMember({"table", "smoothed"}));
  learn_cmd->add_option("--bandwidth", learn.bandwidth, "smoothing half-width in k");
  learn_cmd->add_option("--route", learn.route,
                        "learn weights for prefixes of this route instead of random walks");
  learn_cmd->add_option("--hours", learn.hours, "restrict to a time-of-day partition FROM,TO");
  learn_cmd->add_option("--seed", learn.seed, "random seed");
  learn_cmd->add_option("--out", learn.out, "weight file to write")->required();

  StatsArgs stats;
  auto* stats_cmd =
      app.add_subcommand("stats", "Accumulate per-segment window statistics and export them");
  stats_cmd->add_option("--net", stats.net, "network file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--trips", stats.trips, "trip file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--delta", stats.delta, "window width in minutes");
  stats_cmd->add_option("--origin", stats.origin, "window grid origin timestamp");
  stats_cmd->add_option("--lookback", stats.lookback, "stale-window fallback budget");
  stats_cmd->add_option("--hist-range", stats.hist_range,
                        "historical fallback range FROM,TO (half-open)");
  stats_cmd->add_option("--out", stats.out, "statistics file to write")->required();

  EvaluateArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run the train/test evaluation protocol");
  eval_cmd->add_option("--net", ev.net, "network file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--trips", ev.trips, "trip file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--weights", ev.weights, "weight file (needed for COM)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--train-range", ev.train_range, "training range FROM,TO")->required();
  eval_cmd->add_option("--test-range", ev.test_range, "test range FROM,TO")->required();
  eval_cmd->add_option("--delta", ev.deltas, "window widths in minutes")
      ->required()
      ->delimiter(',');
  eval_cmd->add_option("--methods", ev.methods, "comma list of SMD,SMN,COM,MED");
  eval_cmd->add_option("--fixed-route", ev.fixed_route,
                       "restrict to this exact route and report per prefix length");
  eval_cmd->add_option("--lookback", ev.lookback, "stale-window fallback budget");
  eval_cmd->add_option("--origin", ev.origin, "window grid origin timestamp");
  eval_cmd->add_flag("--audit", ev.audit, "verify no prediction touches the start window");
  eval_cmd->add_option("--dump-predictions", ev.dump_predictions,
                       "write per-trip prediction rows to this file");
  eval_cmd->add_option("--out-dir", ev.out_dir, "directory for .dat report tables")->required();

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "Predict travel time for an ad-hoc route");
  predict_cmd->add_option("--net", pr.net, "network file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--stats", pr.stats, "statistics file from the stats command")
      ->required()
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--weights", pr.weights, "weight file")->check(CLI::ExistingFile);
  predict_cmd->add_option("--route", pr.route, "segment ids a,b,c or a group like main44")
      ->required();
  predict_cmd->add_option("--at", pr.at, "departure timestamp")->required();

  try {
    app.parse(argc, argv);
    if (*synth_cmd) {
      synth.has_seed = seed_opt->count() > 0;
      return run_synth(synth);
    }
    if (*learn_cmd) return run_learn(learn);
    if (*stats_cmd) return run_stats(stats);
    if (*eval_cmd) return run_evaluate(ev);
    if (*predict_cmd) return run_predict(pr);
    return kUsageError;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }
}
