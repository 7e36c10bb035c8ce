/* C interface to the travel-time prediction library.
 *
 * All functions returning int use 0 for success and a TTP_ERR_* code
 * otherwise; ttp_last_error() describes the most recent failure on the
 * calling thread. Objects are opaque; free them with the matching
 * ttp_*_free.
 */
#ifndef TTP_TTP_H
#define TTP_TTP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TTP_API __declspec(dllexport)
#else
#define TTP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define TTP_OK 0
#define TTP_ERR_INVALID_ARGUMENT 1
#define TTP_ERR_IO 2
#define TTP_ERR_PARSE 3
#define TTP_ERR_NO_DATA 4
#define TTP_ERR_INFEASIBLE 5
#define TTP_ERR_INTERNAL 6

typedef struct ttp_network ttp_network;
typedef struct ttp_trips ttp_trips;
typedef struct ttp_stats ttp_stats;
typedef struct ttp_weights ttp_weights;

TTP_API const char* ttp_version(void);
/* Message from the last failing call on this thread; never NULL. */
TTP_API const char* ttp_last_error(void);

/* "YYYY-MM-DD[THH:MM[:SS]]" (space accepted for 'T') or plain epoch seconds. */
TTP_API int ttp_parse_timestamp(const char* text, int64_t* out);

/* ---- network ---- */
TTP_API int ttp_network_load(const char* path, ttp_network** out);
TTP_API int ttp_network_save(const ttp_network* net, const char* path);
TTP_API int ttp_network_segment_count(const ttp_network* net, size_t* out);
TTP_API int ttp_network_total_length_m(const ttp_network* net, double* out);
TTP_API void ttp_network_free(ttp_network* net);

/* ---- synthetic data ---- */
typedef struct {
  uint64_t segments;
  uint64_t trips;
} ttp_synth_summary;

/* has_seed_override != 0 replaces the config file's seed. Either output path
 * may be NULL to skip writing that file. */
TTP_API int ttp_synth_run(const char* config_path, int has_seed_override, uint64_t seed_override,
                          const char* out_net_path, const char* out_trips_path,
                          ttp_synth_summary* out);

/* ---- trips ---- */
/* rejects_path may be NULL; accepted/rejected may be NULL. */
TTP_API int ttp_trips_load(const char* path, const ttp_network* net, const char* rejects_path,
                           ttp_trips** out, uint64_t* accepted, uint64_t* rejected);
TTP_API void ttp_trips_free(ttp_trips* trips);

/* ---- weight function ---- */
typedef struct {
  int k_max;
  int h;            /* synthetic trips per data point */
  int n_points;     /* data points */
  double grid_step; /* weight grid resolution */
  uint64_t seed;
  int64_t train_from; /* half-open range of trip end times */
  int64_t train_to;
  int smoothed;  /* 0 = lookup table, 1 = smoothed table */
  int bandwidth; /* smoothing half-width in k */
  /* NULL for network random walks; otherwise a route spec ("a,b,c" or a
   * prefix group like "main44") whose prefixes are used instead. */
  const char* fixed_route;
  int hour_from; /* optional time-of-day partition, half-open; -1 = off */
  int hour_to;
} ttp_learn_params;

TTP_API int ttp_weights_learn(const ttp_network* net, const ttp_trips* trips,
                              const ttp_learn_params* params, ttp_weights** out);
TTP_API int ttp_weights_save(const ttp_weights* wf, const char* path);
TTP_API int ttp_weights_load(const char* path, ttp_weights** out);
TTP_API int ttp_weights_eval(const ttp_weights* wf, int k, double* out);
/* Table iteration in ascending k. points = data points behind the entry
 * (0 for loaded functions). Any out pointer may be NULL. */
TTP_API int ttp_weights_entry_count(const ttp_weights* wf, size_t* out);
TTP_API int ttp_weights_entry(const ttp_weights* wf, size_t index, int* k, double* w,
                              uint64_t* points);
TTP_API void ttp_weights_free(ttp_weights* wf);

/* ---- statistics store ---- */
/* has_hist != 0 declares [hist_from, hist_to) as the historical fallback
 * range. */
TTP_API int ttp_stats_build(const ttp_network* net, const ttp_trips* trips, int delta_min,
                            int64_t origin, int lookback, int has_hist, int64_t hist_from,
                            int64_t hist_to, ttp_stats** out);
TTP_API int ttp_stats_save(const ttp_stats* stats, const char* path);
TTP_API int ttp_stats_load(const char* path, const ttp_network* net, ttp_stats** out);
TTP_API void ttp_stats_free(ttp_stats* stats);

/* ---- ad-hoc prediction ---- */
typedef struct {
  double smd_s;  /* sum of segment medians */
  double smn_s;  /* sum of segment means */
  double com_s;  /* combined estimate; equals smd_s when no weights given */
  double weight; /* w_k actually applied */
  int k;
  double length_m;
  int fresh; /* per-segment estimate provenance counts */
  int stale;
  int historical;
  int64_t window; /* statistics window the prediction drew from */
} ttp_prediction;

/* Predicts for a departure at at_ts from the window preceding it. weights may
 * be NULL (combined estimate falls back to the median sum). */
TTP_API int ttp_predict_route(const ttp_network* net, const ttp_stats* stats,
                              const ttp_weights* weights, const char* route_spec, int64_t at_ts,
                              ttp_prediction* out);

/* ---- evaluation protocol ---- */
typedef struct {
  int64_t train_from; /* half-open ranges */
  int64_t train_to;
  int64_t test_from;
  int64_t test_to;
  const int* deltas_min;
  size_t n_deltas;
  const char* methods;     /* comma list of SMD,SMN,COM,MED */
  const char* fixed_route; /* NULL = network-wide; else per-k study route */
  int lookback;
  int64_t origin;
  int audit; /* verify no prediction touches the trip's start window */
  const char* dump_predictions; /* per-trip rows, NULL = skip */
} ttp_eval_params;

typedef struct {
  uint64_t trips_evaluated; /* summed over discretization steps */
  uint64_t files_written;
  uint64_t audit_checked;
  uint64_t audit_violations;
} ttp_eval_summary;

TTP_API int ttp_evaluate_run(const ttp_network* net, const ttp_trips* trips,
                             const ttp_weights* weights, const ttp_eval_params* params,
                             const char* out_dir, ttp_eval_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* TTP_TTP_H */
