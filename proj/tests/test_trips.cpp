#include <filesystem>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "ttp/error.hpp"
#include "ttp/timeutil.hpp"
#include "ttp/trips.hpp"

using namespace ttp;

TEST_CASE("trip records parse and derive end timestamps") {
  const auto dir = testsup::scratch_dir("trips_parse");
  const RoadNetwork net = testsup::chain_network(3);
  const auto path = dir / "trips.jsonl";
  testsup::write_file(
      path,
      R"({"trip_id":"t1","start_ts":0,"segments":[{"id":"c00","t":10},{"id":"c01","t":20}]})"
      "\n"
      R"({"trip_id":"t2","start_ts":100,"segments":[{"id":"c02","t":7.25}]})"
      "\n");

  const TripParseResult res = parse_trips(path.string(), net);
  REQUIRE(res.trips.size() == 2);
  CHECK(res.rejects.empty());

  const Trip& t1 = res.trips[0];
  CHECK(t1.id == "t1");
  CHECK(t1.total_seconds() == doctest::Approx(30.0));
  CHECK(t1.end_ts == 30);
  CHECK(t1.k() == 2);
  CHECK(t1.route() == Route{0, 1});

  // fractional totals round to the nearest second for the end timestamp
  CHECK(res.trips[1].end_ts == 107);
}

TEST_CASE("invalid records are rejected with reasons, not fatally") {
  const auto dir = testsup::scratch_dir("trips_rejects");
  const RoadNetwork net = testsup::chain_network(3);
  const auto path = dir / "trips.jsonl";
  testsup::write_file(
      path,
      R"({"trip_id":"ok","start_ts":0,"segments":[{"id":"c00","t":5}]})" "\n"
      "this is not a record\n"
      R"({"trip_id":"ghost","start_ts":0,"segments":[{"id":"zz","t":5}]})" "\n"
      R"({"trip_id":"gap","start_ts":0,"segments":[{"id":"c00","t":5},{"id":"c02","t":5}]})" "\n"
      R"({"trip_id":"frozen","start_ts":0,"segments":[{"id":"c00","t":0}]})" "\n");

  const TripParseResult res = parse_trips(path.string(), net);
  CHECK(res.trips.size() == 1);
  REQUIRE(res.rejects.size() == 4);
  CHECK(res.rejects[0].line_no == 2);
  CHECK(res.rejects[0].reason == "parse");
  CHECK(res.rejects[1].reason == "unknown_segment");
  CHECK(res.rejects[1].trip_id == "ghost");
  CHECK(res.rejects[2].reason == "connectivity");
  CHECK(res.rejects[3].reason == "nonpositive_time");

  const auto rejects_path = dir / "trips.jsonl.rejects";
  write_rejects(res.rejects, rejects_path.string());
  const std::string report = testsup::read_file(rejects_path);
  CHECK(report.rfind("#", 0) == 0);  // header comment first
  CHECK(report.find("ghost\tunknown_segment") != std::string::npos);
  CHECK(report.find("\tparse") != std::string::npos);
}

TEST_CASE("trip files round trip, including ids that need escaping") {
  const auto dir = testsup::scratch_dir("trips_roundtrip");
  const RoadNetwork net = testsup::chain_network(2);
  std::vector<Trip> trips;
  trips.push_back(testsup::make_trip("plain", 50, {{0, 12.5}, {1, 3.125}}));
  trips.push_back(testsup::make_trip("odd\"id\\x", 80, {{1, 9.0}}));

  const auto path = (dir / "out.jsonl").string();
  save_trips(trips, net, path);
  const TripParseResult back = parse_trips(path, net);

  REQUIRE(back.trips.size() == 2);
  CHECK(back.rejects.empty());
  CHECK(back.trips[0].id == "plain");
  CHECK(back.trips[0].start_ts == 50);
  CHECK(back.trips[0].end_ts == 66);
  CHECK(back.trips[0].traversals[1].seconds == 3.125);
  CHECK(back.trips[1].id == "odd\"id\\x");
}

TEST_CASE("a trip contributes statistics to the window holding its end time") {
  // ten-minute grid anchored at 13:00
  const TimeGrid grid{10, timestamp_utc(2012, 11, 5, 13, 0)};

  Trip t;
  t.start_ts = timestamp_utc(2012, 11, 5, 13, 48);
  t.end_ts = timestamp_utc(2012, 11, 5, 13, 55);
  const auto w = estimation_window(grid, t);
  CHECK(grid.window_start(w) == timestamp_utc(2012, 11, 5, 13, 50));

  // boundary end lands in the next window (half-open convention)
  t.end_ts = timestamp_utc(2012, 11, 5, 14, 0);
  CHECK(grid.window_start(estimation_window(grid, t)) == timestamp_utc(2012, 11, 5, 14, 0));

  const TimeGrid hourly{60, 0};
  t.end_ts = timestamp_utc(1970, 1, 1, 14, 59, 59);
  CHECK(hourly.window_start(estimation_window(hourly, t)) == timestamp_utc(1970, 1, 1, 14, 0));
}

TEST_CASE("predictions read the window immediately before the start") {
  const TimeGrid grid{10, timestamp_utc(2012, 11, 5, 13, 0)};

  Trip t;
  t.start_ts = timestamp_utc(2012, 11, 5, 14, 7);
  t.end_ts = timestamp_utc(2012, 11, 5, 14, 15);
  const auto w = prediction_window(grid, t);
  REQUIRE(w.has_value());
  CHECK(grid.window_start(*w) == timestamp_utc(2012, 11, 5, 13, 50));

  // starting inside the first grid window leaves nothing complete to read
  t.start_ts = timestamp_utc(2012, 11, 5, 13, 4);
  CHECK_FALSE(prediction_window(grid, t).has_value());
  // same for starts before the grid origin
  t.start_ts = timestamp_utc(2012, 11, 5, 12, 0);
  CHECK_FALSE(prediction_window(grid, t).has_value());

  // a start exactly on a boundary belongs to the window it opens, so the
  // full window just closed is the one consulted
  const TimeGrid two_hour{120, 0};
  t.start_ts = timestamp_utc(1970, 1, 1, 14, 0);
  const auto w2 = prediction_window(two_hour, t);
  REQUIRE(w2.has_value());
  CHECK(two_hour.window_start(*w2) == timestamp_utc(1970, 1, 1, 12, 0));
}

TEST_CASE("window indices behave across the grid origin") {
  const TimeGrid grid{10, 0};
  CHECK(grid.window_of(0) == 0);
  CHECK(grid.window_of(599) == 0);
  CHECK(grid.window_of(600) == 1);
  CHECK(grid.window_of(-1) == -1);
  CHECK(grid.window_of(-600) == -1);
  CHECK(grid.window_of(-601) == -2);
  CHECK(grid.window_start(-1) == -600);
}

TEST_CASE("timestamps parse in both accepted forms") {
  CHECK(parse_timestamp("0") == 0);
  CHECK(parse_timestamp("946684800") == timestamp_utc(2000, 1, 1));
  CHECK(parse_timestamp("2000-01-01 00:00:00") == timestamp_utc(2000, 1, 1));
  CHECK(parse_timestamp("2000-01-01T00:00") == timestamp_utc(2000, 1, 1));
  CHECK(parse_timestamp("2012-11-05 13:48") == timestamp_utc(2012, 11, 5, 13, 48));
  CHECK_THROWS_AS(parse_timestamp("yesterday"), Error);
  CHECK_THROWS_AS(parse_timestamp("2012-13-05 00:00"), Error);

  CHECK(format_timestamp(timestamp_utc(2012, 11, 5, 13, 48, 9)) == "2012-11-05T13:48:09");
  CHECK(month_key(timestamp_utc(2012, 11, 30, 23, 59, 59)) == 201211);
  CHECK(month_key(timestamp_utc(2012, 12, 1)) == 201212);
}
