#include "ttp/stats.hpp"

#include <algorithm>
#include <fstream>

#include "format.hpp"
#include "ttp/summary.hpp"

namespace ttp {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::fresh: return "fresh";
    case Provenance::stale: return "stale";
    case Provenance::historical: return "historical";
  }
  return "?";
}

namespace {

StatsStore::Summary summarize_sorted_block(const double* begin, const double* end) {
  StatsStore::Summary s;
  s.count = static_cast<std::uint64_t>(end - begin);
  double sum = 0.0;
  for (const double* p = begin; p != end; ++p) sum += *p;
  s.mean = sum / static_cast<double>(s.count);
  const std::uint64_t n = s.count;
  s.median = (n % 2 == 1) ? begin[n / 2] : 0.5 * (begin[n / 2 - 1] + begin[n / 2]);
  return s;
}

}  // namespace

StatsStore::StatsStore(const RoadNetwork& net, TimeGrid grid, int lookback)
    : grid_(grid), lookback_(lookback) {
  if (lookback < 0) fail(Errc::invalid_argument, "lookback must be >= 0");
  if (grid.delta_min < 1) fail(Errc::invalid_argument, "window width must be >= 1 minute");
  ids_.reserve(net.size());
  for (const Segment& s : net.segments()) ids_.push_back(s.id);
  segments_.resize(net.size());
}

void StatsStore::add_observation(std::uint32_t seg, std::int64_t window, double seconds) {
  if (finalized_ || summaries_only_)
    fail(Errc::invalid_argument, "store no longer accepts observations");
  if (seg >= segments_.size()) fail(Errc::invalid_argument, "segment index out of range");
  segments_[seg].pending.emplace_back(window, seconds);
}

void StatsStore::add_trip(const Trip& trip) {
  const std::int64_t w = estimation_window(grid_, trip);
  for (const Traversal& t : trip.traversals) add_observation(t.segment, w, t.seconds);
}

void StatsStore::finalize() {
  if (summaries_only_) fail(Errc::invalid_argument, "store was loaded summary-only");
  if (finalized_) return;
  for (SegmentData& sd : segments_) {
    // sorting by (window, value) makes the result insertion-order independent
    std::sort(sd.pending.begin(), sd.pending.end());
    sd.windows.clear();
    sd.offsets.clear();
    sd.summaries.clear();
    sd.samples.clear();
    sd.samples.reserve(sd.pending.size());
    sd.offsets.push_back(0);
    std::size_t i = 0;
    while (i < sd.pending.size()) {
      const std::int64_t w = sd.pending[i].first;
      const std::size_t begin = i;
      while (i < sd.pending.size() && sd.pending[i].first == w) {
        sd.samples.push_back(sd.pending[i].second);
        ++i;
      }
      sd.windows.push_back(w);
      sd.offsets.push_back(sd.samples.size());
      sd.summaries.push_back(
          summarize_sorted_block(sd.samples.data() + begin, sd.samples.data() + i));
    }
    sd.pending.clear();
    sd.pending.shrink_to_fit();
  }
  finalized_ = true;
}

void StatsStore::merge_from(StatsStore&& other) {
  if (finalized_ || other.finalized_ || summaries_only_ || other.summaries_only_)
    fail(Errc::invalid_argument, "merge requires two unfinalized stores");
  if (segments_.size() != other.segments_.size() || grid_.delta_min != other.grid_.delta_min ||
      grid_.origin != other.grid_.origin)
    fail(Errc::invalid_argument, "merging stores with different shape");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    auto& mine = segments_[i].pending;
    auto& theirs = other.segments_[i].pending;
    mine.insert(mine.end(), theirs.begin(), theirs.end());
    theirs.clear();
  }
}

void StatsStore::set_historical_range(std::int64_t from_ts, std::int64_t to_ts) {
  if (summaries_only_) fail(Errc::invalid_argument, "summary-only store cannot re-aggregate");
  if (!finalized_) fail(Errc::invalid_argument, "finalize before declaring history");
  if (!(from_ts < to_ts)) fail(Errc::invalid_argument, "empty historical range");
  // only windows fully inside [from_ts, to_ts) participate
  std::int64_t w_from = grid_.window_of(from_ts);
  if (grid_.window_start(w_from) < from_ts) ++w_from;
  std::int64_t w_to = grid_.window_of(to_ts);  // first window not fully inside
  if (grid_.window_start(w_to) + grid_.delta_s() <= to_ts) ++w_to;
  if (w_from >= w_to) fail(Errc::invalid_argument, "historical range narrower than one window");

  hist_upper_ = w_to - 1;
  hist_upper_set_ = true;

  std::vector<double> pool;
  for (SegmentData& sd : segments_) {
    pool.clear();
    const auto lo =
        std::lower_bound(sd.windows.begin(), sd.windows.end(), w_from) - sd.windows.begin();
    const auto hi =
        std::lower_bound(sd.windows.begin(), sd.windows.end(), w_to) - sd.windows.begin();
    for (auto wi = lo; wi < hi; ++wi)
      pool.insert(pool.end(), sd.samples.begin() + static_cast<std::ptrdiff_t>(sd.offsets[wi]),
                  sd.samples.begin() + static_cast<std::ptrdiff_t>(sd.offsets[wi + 1]));
    if (pool.empty()) {
      sd.has_hist = false;
      continue;
    }
    std::sort(pool.begin(), pool.end());
    sd.hist = summarize_sorted_block(pool.data(), pool.data() + pool.size());
    sd.has_hist = true;
  }
}

Estimate StatsStore::estimate(std::uint32_t seg, std::int64_t window) const {
  if (seg >= segments_.size()) fail(Errc::invalid_argument, "segment index out of range");
  if (!finalized_ && !summaries_only_) fail(Errc::invalid_argument, "store not finalized");
  const SegmentData& sd = segments_[seg];

  // nearest window at or before the query answers both the fresh and the
  // stale tier
  const auto up = std::upper_bound(sd.windows.begin(), sd.windows.end(), window);
  if (up != sd.windows.begin()) {
    const auto idx = static_cast<std::size_t>(up - sd.windows.begin()) - 1;
    const std::int64_t w = sd.windows[idx];
    if (w == window) {
      const Summary& s = sd.summaries[idx];
      return Estimate{s.mean, s.median, s.count, Provenance::fresh, w};
    }
    if (w >= window - lookback_) {
      const Summary& s = sd.summaries[idx];
      return Estimate{s.mean, s.median, s.count, Provenance::stale, w};
    }
  }
  // The aggregate may only answer queries at or past its own coverage, so a
  // query inside the historical range is never served future data.
  if (sd.has_hist && hist_upper_set_ && hist_upper_ <= window)
    return Estimate{sd.hist.mean, sd.hist.median, sd.hist.count, Provenance::historical,
                    hist_upper_};
  fail(Errc::no_data,
       "segment '" + ids_[seg] + "': no data at or before window " + std::to_string(window));
}

std::uint64_t StatsStore::total_observations() const {
  std::uint64_t total = 0;
  for (const SegmentData& sd : segments_) {
    total += sd.pending.size();
    for (const Summary& s : sd.summaries) total += summaries_only_ ? s.count : 0;
    if (!summaries_only_) total += sd.samples.size();
  }
  return total;
}

const StatsStore::Summary* StatsStore::window_summary(std::uint32_t seg,
                                                      std::int64_t window) const {
  if (seg >= segments_.size()) return nullptr;
  const SegmentData& sd = segments_[seg];
  const auto it = std::lower_bound(sd.windows.begin(), sd.windows.end(), window);
  if (it == sd.windows.end() || *it != window) return nullptr;
  return &sd.summaries[static_cast<std::size_t>(it - sd.windows.begin())];
}

void StatsStore::save(const std::string& path) const {
  if (!finalized_ && !summaries_only_) fail(Errc::invalid_argument, "store not finalized");
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  out << "# delta_min " << grid_.delta_min << "\n";
  out << "# origin " << grid_.origin << "\n";
  out << "# lookback " << lookback_ << "\n";
  if (hist_upper_set_) out << "# hist_upper " << hist_upper_ << "\n";
  out << "# columns segment_id\twindow\tcount\tmean\tmedian\n";
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const SegmentData& sd = segments_[i];
    for (std::size_t wi = 0; wi < sd.windows.size(); ++wi) {
      const Summary& s = sd.summaries[wi];
      out << ids_[i] << '\t' << sd.windows[wi] << '\t' << s.count << '\t' << fmt_double(s.mean)
          << '\t' << fmt_double(s.median) << '\n';
    }
    if (sd.has_hist) {
      out << ids_[i] << "\thist\t" << sd.hist.count << '\t' << fmt_double(sd.hist.mean) << '\t'
          << fmt_double(sd.hist.median) << '\n';
    }
  }
  if (!out) fail(Errc::io, "write error on '" + path + "'");
}

namespace {

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find('\t', pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

StatsStore StatsStore::load(const std::string& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open stats file '" + path + "'");

  TimeGrid grid;
  int lookback = 6;
  std::int64_t hist_upper = 0;
  bool hist_upper_set = false;

  struct Row {
    std::uint32_t seg;
    bool is_hist;
    std::int64_t window;
    Summary summary;
  };
  std::vector<Row> rows;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      // headers look like "# key value"
      std::size_t p = 1;
      while (p < line.size() && line[p] == ' ') ++p;
      const std::size_t sp = line.find(' ', p);
      if (sp != std::string::npos) {
        const std::string key = line.substr(p, sp - p);
        const std::string value = line.substr(sp + 1);
        try {
          if (key == "delta_min") grid.delta_min = static_cast<int>(parse_int(value));
          else if (key == "origin") grid.origin = parse_int(value);
          else if (key == "lookback") lookback = static_cast<int>(parse_int(value));
          else if (key == "hist_upper") {
            hist_upper = parse_int(value);
            hist_upper_set = true;
          }
        } catch (const Error&) {
          fail(Errc::parse, path + ":" + std::to_string(line_no) + ": bad header value");
        }
      }
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 5)
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": expected 5 fields");
    Row row;
    row.seg = net.index_of(fields[0]);
    row.is_hist = fields[1] == "hist";
    row.window = row.is_hist ? 0 : parse_int(fields[1]);
    row.summary.count = static_cast<std::uint64_t>(parse_int(fields[2]));
    row.summary.mean = parse_double(fields[3]);
    row.summary.median = parse_double(fields[4]);
    if (row.summary.count < 1)
      fail(Errc::parse, path + ":" + std::to_string(line_no) + ": zero count");
    rows.push_back(row);
  }
  if (in.bad()) fail(Errc::io, "read error on '" + path + "'");

  StatsStore store(net, grid, lookback);
  store.summaries_only_ = true;
  store.hist_upper_ = hist_upper;
  store.hist_upper_set_ = hist_upper_set;
  // group rows per segment, then sort by window
  std::vector<std::vector<Row>> per_seg(net.size());
  for (const Row& row : rows) per_seg[row.seg].push_back(row);
  for (std::size_t i = 0; i < per_seg.size(); ++i) {
    SegmentData& sd = store.segments_[i];
    std::sort(per_seg[i].begin(), per_seg[i].end(),
              [](const Row& a, const Row& b) { return a.window < b.window; });
    for (const Row& row : per_seg[i]) {
      if (row.is_hist) {
        if (!hist_upper_set) fail(Errc::parse, "stats file has hist rows but no hist_upper header");
        sd.hist = row.summary;
        sd.has_hist = true;
      } else {
        if (!sd.windows.empty() && sd.windows.back() == row.window)
          fail(Errc::parse, "duplicate window row for segment '" + store.ids_[i] + "'");
        sd.windows.push_back(row.window);
        sd.summaries.push_back(row.summary);
      }
    }
  }
  return store;
}

StatsStore accumulate(const RoadNetwork& net, const std::vector<Trip>& trips, TimeGrid grid,
                      int lookback) {
  StatsStore store(net, grid, lookback);
  for (const Trip& t : trips) store.add_trip(t);
  store.finalize();
  return store;
}

}  // namespace ttp
