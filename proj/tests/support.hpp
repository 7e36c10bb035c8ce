#pragma once

// Shared helpers for the test suites: scratch directories, tiny networks,
// and hand-built trips.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "ttp/network.hpp"
#include "ttp/trips.hpp"

namespace testsup {

inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("ttp_test_" + tag + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// c00 -> c01 -> ... -> c<n-1>, uniform segment length
inline ttp::RoadNetwork chain_network(int n, double len_m = 500.0) {
  ttp::RoadNetwork net;
  char buf[16];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "c%02d", i);
    net.add_segment(buf, len_m);
  }
  for (int i = 0; i + 1 < n; ++i)
    net.add_link(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1));
  return net;
}

// ring over 0..n-1 in index order; every walk can continue forever
inline ttp::RoadNetwork ring_network(int n, double len_m = 500.0) {
  ttp::RoadNetwork net = chain_network(n, len_m);
  if (n > 1) net.add_link(static_cast<std::uint32_t>(n - 1), 0);
  return net;
}

inline ttp::Trip make_trip(std::string id, std::int64_t start_ts,
                           std::vector<ttp::Traversal> traversals) {
  ttp::Trip t;
  t.id = std::move(id);
  t.start_ts = start_ts;
  t.traversals = std::move(traversals);
  t.end_ts = start_ts + std::llround(t.total_seconds());
  return t;
}

// single-segment trip ending at end_ts, the minimal stats feed
inline ttp::Trip obs_trip(std::string id, std::uint32_t seg, std::int64_t end_ts,
                          double seconds) {
  ttp::Trip t;
  t.id = std::move(id);
  t.traversals = {{seg, seconds}};
  t.end_ts = end_ts;
  t.start_ts = end_ts - std::llround(seconds);
  return t;
}

}  // namespace testsup
