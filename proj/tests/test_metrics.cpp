#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "ricci/errors.hpp"
#include "ricci/metrics.hpp"

using namespace ricci;
using testing::load_example;
using testing::node;

namespace {

std::vector<NodeId> nodes(const WeightedGraph& g, std::initializer_list<const char*> names) {
  std::vector<NodeId> out;
  for (const char* n : names) out.push_back(node(g, n));
  return out;
}

}  // namespace

TEST_CASE("seven-node example") {
  auto g = load_example("seven_node");
  auto small = nodes(g, {"x1", "x2", "x3"});
  CHECK(std::abs(core_cohesiveness(g, small) - 5.0 / 6.0) <= 1e-12);
  auto s = distance_stretch(g, small);
  REQUIRE(s.r_s.has_value());
  CHECK(std::abs(*s.r_s - 13.0 / 12.0) <= 1e-12);
  CHECK(s.xi == 6);

  auto big = nodes(g, {"x3", "x4", "x5", "x6", "x7"});
  CHECK(std::abs(core_cohesiveness(g, big) - 9.0 / 10.0) <= 1e-12);
  auto t = distance_stretch(g, big);
  REQUIRE(t.r_s.has_value());
  CHECK(*t.r_s == 1.0);
  CHECK(t.xi == 1);
}

TEST_CASE("whole graph and empty core") {
  auto g = load_example("seven_node");
  std::vector<NodeId> all;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) all.push_back(NodeId{i});
  CHECK(core_cohesiveness(g, all) == 1.0);
  CHECK_FALSE(distance_stretch(g, all).r_s.has_value());
  auto none = distance_stretch(g, std::vector<NodeId>{});
  CHECK(none.r_s == 1.0);
  CHECK(none.xi == g.node_count() * (g.node_count() - 1) / 2);
  CHECK_THROWS_AS(core_cohesiveness(g, std::vector<NodeId>{}), DomainError);
}

TEST_CASE("cohesiveness ignores weights") {
  auto g = load_example("seven_node");
  auto core = nodes(g, {"x1", "x2", "x3"});
  auto scaled = g;
  for (EdgeId e : g.live_edges()) scaled.set_weight(e, 1.0 + e.value);
  CHECK(core_cohesiveness(g, core) == core_cohesiveness(scaled, core));
}

TEST_CASE("stretch matches floyd-warshall") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testing::random_connected_graph(rng, 10, trial % 6, 1.0, 1.0);
    std::vector<NodeId> core;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
      if (rng() % 3 == 0) core.push_back(NodeId{i});
    }
    auto [oracle, xi] = testing::stretch_by_floyd(g, core);
    auto serial = distance_stretch_serial(g, core);
    auto parallel = distance_stretch(g, core);
    CHECK(serial.xi == xi);
    CHECK(parallel.xi == xi);
    if (xi == 0) {
      CHECK_FALSE(serial.r_s.has_value());
    } else {
      REQUIRE(serial.r_s.has_value());
      CHECK(std::abs(*serial.r_s - oracle) <= 1e-12);
      CHECK(*serial.r_s >= 1.0);
      CHECK(*parallel.r_s == *serial.r_s);
    }
  }
}

TEST_CASE("metrics export") {
  auto g = load_example("triangle_spokes");
  auto report = evaluate_core(g, nodes(g, {"x1", "x2", "x3"}));
  CHECK(report.core_nodes == 3);
  CHECK(report.core_edges == 3);
  std::ostringstream out;
  write_metrics_json(out, report);
  auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["r_s"].is_null());
  CHECK(doc["r_s_valid"] == false);
  CHECK(doc["xi"] == 0);
}
