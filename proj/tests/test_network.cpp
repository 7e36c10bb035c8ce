#include <algorithm>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "ttp/error.hpp"
#include "ttp/network.hpp"
#include "ttp/rng.hpp"

using namespace ttp;

TEST_CASE("segments, links, and route connectivity") {
  RoadNetwork net;
  const auto a = net.add_segment("a", 100.0);
  const auto b = net.add_segment("b", 250.5);
  const auto c = net.add_segment("c", 50.0);
  net.add_link(a, b);
  net.add_link(b, c);
  net.add_link(b, c);  // duplicate links collapse

  CHECK(net.size() == 3);
  CHECK(net.segment(b).successors.size() == 1);
  CHECK(net.index_of("b") == b);
  CHECK(net.contains("c"));
  CHECK_FALSE(net.contains("d"));
  CHECK_THROWS_AS(net.index_of("d"), Error);

  CHECK(net.is_connected_route({a, b, c}));
  CHECK(net.is_connected_route({b}));
  CHECK_FALSE(net.is_connected_route({c, b, a}));
  CHECK_FALSE(net.is_connected_route({a, c}));

  CHECK(net.route_length_m({a, b, c}) == doctest::Approx(400.5));
  CHECK(net.total_length_m() == doctest::Approx(400.5));
}

TEST_CASE("duplicate segment ids are rejected") {
  RoadNetwork net;
  net.add_segment("a", 100.0);
  CHECK_THROWS_AS(net.add_segment("a", 200.0), Error);
}

TEST_CASE("network file round trip") {
  const auto dir = testsup::scratch_dir("net_roundtrip");
  RoadNetwork net = testsup::ring_network(5, 320.0);
  const auto path = (dir / "net.tsv").string();
  save_network(net, path);

  const RoadNetwork back = load_network(path);
  REQUIRE(back.size() == net.size());
  for (std::uint32_t i = 0; i < net.size(); ++i) {
    CHECK(back.segment(i).id == net.segment(i).id);
    CHECK(back.segment(i).length_m == net.segment(i).length_m);
    CHECK(back.segment(i).successors == net.segment(i).successors);
  }
}

TEST_CASE("network file tolerates comments and forward references") {
  const auto dir = testsup::scratch_dir("net_parse");
  const auto path = dir / "net.tsv";
  // successor 'b' appears before its own row; resolution is two-phase
  testsup::write_file(path,
                      "# comment line\n"
                      "a\t100\tb\n"
                      "\n"
                      "b\t200\t\n");
  const RoadNetwork net = load_network(path.string());
  REQUIRE(net.size() == 2);
  CHECK(net.segment(net.index_of("a")).successors ==
        std::vector<std::uint32_t>{net.index_of("b")});
  CHECK(net.segment(net.index_of("b")).successors.empty());
}

TEST_CASE("network file parse errors carry line numbers") {
  const auto dir = testsup::scratch_dir("net_errors");

  const auto missing = dir / "missing_field.tsv";
  testsup::write_file(missing, "a\t100\tb\nb\n");
  CHECK_THROWS_WITH_AS(load_network(missing.string()),
                       doctest::Contains(":2:"), Error);

  const auto bad_len = dir / "bad_len.tsv";
  testsup::write_file(bad_len, "a\tnope\t\n");
  CHECK_THROWS_AS(load_network(bad_len.string()), Error);

  const auto unknown_succ = dir / "unknown_succ.tsv";
  testsup::write_file(unknown_succ, "a\t100\tzz\n");
  CHECK_THROWS_AS(load_network(unknown_succ.string()), Error);

  CHECK_THROWS_AS(load_network((dir / "does_not_exist.tsv").string()), Error);
}

TEST_CASE("route specs resolve to connected routes") {
  RoadNetwork net;
  const auto a = net.add_segment("a", 100.0);
  const auto m1 = net.add_segment("main3_01", 100.0);
  const auto m2 = net.add_segment("main3_02", 100.0);
  const auto m3 = net.add_segment("main3_03", 100.0);
  net.add_link(a, m1);
  net.add_link(m1, m2);
  net.add_link(m2, m3);

  CHECK(resolve_route_spec(net, "a,main3_01,main3_02") == Route{a, m1, m2});
  CHECK(resolve_route_spec(net, "a") == Route{a});
  // group form expands by numeric suffix order
  CHECK(resolve_route_spec(net, "main3") == Route{m1, m2, m3});

  CHECK_THROWS_AS(resolve_route_spec(net, "nope"), Error);
  CHECK_THROWS_AS(resolve_route_spec(net, ""), Error);
  // disconnected explicit route
  CHECK_THROWS_AS(resolve_route_spec(net, "main3_02,a"), Error);

  CHECK(route_to_string(net, Route{a, m1}) == "a,main3_01");
}

TEST_CASE("random walks respect length and connectivity") {
  const RoadNetwork net = testsup::ring_network(7);
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    const Route r = net.random_walk_route(rng, 12);
    CHECK(r.size() == 12);
    CHECK(net.is_connected_route(r));
  }

  // identical seeds give identical walks
  Rng r1(5), r2(5);
  CHECK(net.random_walk_route(r1, 9) == net.random_walk_route(r2, 9));
}

TEST_CASE("random walk fails cleanly when no route of length k exists") {
  const RoadNetwork net = testsup::chain_network(2);  // longest route has 2 segments
  Rng rng(1);
  CHECK_THROWS_AS(net.random_walk_route(rng, 3), Error);
}
