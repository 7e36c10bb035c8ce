#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ttp/network.hpp"
#include "ttp/rng.hpp"
#include "ttp/timeutil.hpp"
#include "ttp/trips.hpp"

namespace ttp {

// Everything the generator needs, loadable from a flat key=value file.
struct SynthConfig {
  // network
  int n_segments = 106;
  std::string topology = "random";  // random | chain | ring
  double extra_successors = 1.5;    // mean extra random links per segment
  bool main_road = true;            // embed a marked chain main<len>_01..NN
  int main_road_len = 44;
  double len_min_m = 200.0;
  double len_max_m = 800.0;

  // per-segment travel times
  std::string time_model = "lognormal_time";  // lognormal_time | lognormal_speed
  double mu = std::log(30.0);                 // log-seconds
  double sigma = 1.0;
  double mu_jitter = 0.0;     // per-segment mu_i = mu + U[-j, j]
  double sigma_jitter = 0.0;  // per-segment sigma_i, floored at 0.05
  bool scale_by_length = false;
  double len_ref_m = 500.0;          // divisor when scaling by length
  double speed_mu = std::log(10.0);  // log m/s, lognormal_speed model
  double speed_sigma = 0.5;
  int peak_from = -1;  // UTC hours of day, half-open; -1 disables
  int peak_to = -1;
  double peak_mu_shift = 0.0;

  // trips
  double trips_per_hour = 40.0;
  std::int64_t start_ts = timestamp_utc(2000, 1, 1);
  std::int64_t end_ts = timestamp_utc(2001, 1, 1);
  int k_min = 1;
  int k_max = 30;
  double main_road_share = 0.06;  // probability of a full main-road trip
  int time_decimals = 3;

  std::uint64_t seed = 1;
};

// Strict parse: unknown keys are errors. '#' comments and blank lines allowed.
SynthConfig load_synth_config(const std::string& path);
void validate(const SynthConfig& cfg);

// Random topology is a ring over a shuffled segment order (so every walk can
// continue forever) plus extra random links; chain/ring are the literal
// shapes. The main road is a marked chain embedded on top.
RoadNetwork generate_network(const SynthConfig& cfg, Rng& rng);

// Poisson arrivals per hour with per-hour derived seeds; output sorted by
// start time with sequential ids. Trips reference `net` by segment index.
std::vector<Trip> generate_trips(const RoadNetwork& net, const SynthConfig& cfg,
                                 std::uint64_t seed);

}  // namespace ttp
