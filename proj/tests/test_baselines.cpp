#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "ricci/baselines.hpp"
#include "ricci/errors.hpp"

using namespace ricci;
using testing::load_example;
using testing::node;

TEST_CASE("degree centrality on a star") {
  auto g = load_example("star");
  auto d = degree_centrality(g);
  CHECK(d[node(g, "x0").value] == 1.0);
  CHECK(d[node(g, "x1").value] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("betweenness on a path") {
  auto g = load_edge_list("a b\nb c\n");
  auto b = betweenness_centrality(g);
  CHECK(b[node(g, "b").value] == 1.0);
  CHECK(b[node(g, "a").value] == 0.0);
  CHECK(b[node(g, "c").value] == 0.0);
}

TEST_CASE("betweenness matches path enumeration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_connected_graph(rng, 3 + trial % 6, trial % 5);
    auto oracle = testing::betweenness_by_enumeration(g);
    auto serial = betweenness_centrality_serial(g);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      CHECK(serial[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("parallel betweenness equals serial") {
  std::mt19937_64 rng(2);
  auto g = testing::random_connected_graph(rng, 300, 500);
  CHECK(betweenness_centrality(g, Execution::Parallel) == betweenness_centrality_serial(g));
}

TEST_CASE("closeness on a path") {
  auto g = load_edge_list("a b\nb c\n");
  auto c = closeness_centrality(g);
  CHECK(c[node(g, "b").value] == 1.0);
  CHECK(c[node(g, "a").value] == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(closeness_centrality(load_edge_list("a b\nc d\n")), DomainError);
}

TEST_CASE("pagerank") {
  auto k3 = load_edge_list("a b\nb c\na c\n");
  for (double r : pagerank(k3)) CHECK(r == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testing::random_connected_graph(rng, 40, 30);
    auto base = pagerank(g);
    CHECK(std::accumulate(base.begin(), base.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    auto shuffled = g;
    shuffled.permute_adjacency([](const Incidence& a, const Incidence& b) {
      return a.neighbor.value * 2654435761u % 97 < b.neighbor.value * 2654435761u % 97;
    });
    auto again = pagerank(shuffled);
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(std::abs(base[i] - again[i]) <= 1e-8);
  }

  PageRankOptions tight;
  tight.max_rounds = 1;
  CHECK_THROWS_AS(pagerank(testing::random_connected_graph(rng, 20, 10), tight), ConvergenceError);
}

TEST_CASE("connected top-k") {
  auto star = load_example("star");
  auto picked = connected_top_k(star, centrality(star, Centrality::Degree), 3);
  std::vector<std::string> names;
  for (NodeId x : picked) names.push_back(star.label(x));
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"x0", "x1", "x2"});

  auto path = load_edge_list("a b\nb c\n");
  CentralityScores scores{Centrality::Degree, {3.0, 1.0, 2.0}};
  auto pair = connected_top_k(path, scores, 2);
  CHECK(pair == std::vector<NodeId>{node(path, "a"), node(path, "b")});

  auto ex = load_example("seven_node");
  auto triple = connected_top_k(ex, centrality(ex, Centrality::Degree), 3);
  CHECK(std::find(triple.begin(), triple.end(), node(ex, "x3")) != triple.end());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::random_connected_graph(rng, 30, 15);
    const auto method = kAllCentralities[trial % 4];
    auto s = centrality(g, method);
    const std::size_t k = 1 + trial % 30;
    auto group = connected_top_k(g, s, k);
    CHECK(group.size() == k);
    CHECK(connected_components(induced_subgraph(g, group)).size() == 1);
  }
  auto all = connected_top_k(ex, centrality(ex, Centrality::PageRank), ex.node_count());
  CHECK(all.size() == ex.node_count());
  CHECK_THROWS_AS(connected_top_k(ex, centrality(ex, Centrality::Degree), 0), DomainError);
}

TEST_CASE("adding an edge never lowers endpoint degree scores") {
  auto g = load_example("seven_node");
  auto before = degree_centrality(g);
  g.add_edge(node(g, "x1"), node(g, "x7"), 1.0);
  auto after = degree_centrality(g);
  CHECK(after[node(g, "x1").value] >= before[node(g, "x1").value]);
  CHECK(after[node(g, "x7").value] >= before[node(g, "x7").value]);
}

TEST_CASE("scores export is sorted") {
  auto g = load_example("star");
  std::ostringstream out;
  write_scores_csv(out, g, centrality(g, Centrality::Degree));
  CHECK(out.str().rfind("label,score\nx0,1\n", 0) == 0);
}
