#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "ricci/errors.hpp"
#include "ricci/transport.hpp"

using namespace ricci;

namespace {

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k, bool sparse) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(k);
  double total = 0.0;
  for (auto& x : out) {
    x = sparse && u(rng) < 0.3 ? 0.0 : u(rng);
    total += x;
  }
  if (total == 0.0) {
    out[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : out) x /= total;
  return out;
}

}  // namespace

TEST_CASE("solver matches successive shortest paths on dense instances") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> size(1, 9);
  std::uniform_real_distribution<double> c(0.0, 5.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = size(rng);
    const auto q = size(rng);
    auto supply = random_simplex(rng, p, trial % 2 == 0);
    auto demand = random_simplex(rng, q, trial % 3 == 0);
    std::vector<double> cost(p * q);
    // Integer costs make degenerate ties common.
    for (auto& x : cost) x = trial % 4 == 0 ? std::floor(c(rng)) : c(rng);
    const auto sol = solve_transport(supply, demand, cost);
    CHECK(sol.cost == doctest::Approx(testing::transport_cost_ssp(supply, demand, cost)).epsilon(1e-9));

    std::vector<double> row(p, 0.0), col(q, 0.0);
    for (const auto& [i, j, amount] : sol.cells) {
      CHECK(amount >= 0.0);
      row[i] += amount;
      col[j] += amount;
    }
    for (std::size_t i = 0; i < p; ++i) CHECK(row[i] == doctest::Approx(supply[i]).epsilon(1e-12));
    for (std::size_t j = 0; j < q; ++j) CHECK(col[j] == doctest::Approx(demand[j]).epsilon(1e-12));
  }
}

TEST_CASE("solver is deterministic") {
  std::vector<double> supply{0.25, 0.25, 0.5};
  std::vector<double> demand{0.5, 0.5};
  std::vector<double> cost{1, 1, 1, 1, 1, 1};
  const auto a = solve_transport(supply, demand, cost);
  const auto b = solve_transport(supply, demand, cost);
  CHECK(a.cost == 1.0);
  CHECK(a.cells == b.cells);
}

TEST_CASE("point masses cost their distance") {
  auto g = load_edge_list("a b 2\nb c 3\n");
  const auto a = testing::node(g, "a");
  const auto c = testing::node(g, "c");
  auto dist = pairwise_distances(g, {a}, {c});
  auto plan = wasserstein(dist, make_measure({{a, 1.0}}), make_measure({{c, 1.0}}));
  CHECK(plan.cost == doctest::Approx(5.0));
  REQUIRE(plan.flows.size() == 1);
  CHECK(plan.flows[0].mass == 1.0);
}

TEST_CASE("lazy measure") {
  auto g = load_edge_list("a b 1\na c 3\n");
  const auto a = testing::node(g, "a");
  auto mu = lazy_measure(g, a, 0.2);
  CHECK(mu.total() == doctest::Approx(1.0));
  CHECK(mu.mass(a) == doctest::Approx(0.2));
  CHECK(mu.mass(testing::node(g, "b")) == doctest::Approx(0.2));
  CHECK(mu.mass(testing::node(g, "c")) == doctest::Approx(0.6));

  auto lonely = load_edge_list("a b\n");
  lonely.remove_edge(EdgeId{0});
  CHECK_THROWS_AS(lazy_measure(lonely, NodeId{0}, 0.5), UndefinedWalkError);
}

TEST_CASE("measure contracts") {
  CHECK_THROWS_AS(make_measure({{NodeId{0}, 0.5}}), ContractViolation);
  CHECK_THROWS_AS(make_measure({{NodeId{0}, 1.5}, {NodeId{1}, -0.5}}), ContractViolation);
  auto merged = make_measure({{NodeId{1}, 0.5}, {NodeId{0}, 0.0}, {NodeId{1}, 0.5}});
  CHECK(merged.support.size() == 1);
}

TEST_CASE("disconnected supports are rejected") {
  auto g = load_edge_list("a b\nc d\n");
  const auto a = testing::node(g, "a");
  const auto c = testing::node(g, "c");
  auto dist = pairwise_distances(g, {a}, {c});
  CHECK_THROWS_AS(wasserstein(dist, make_measure({{a, 1.0}}), make_measure({{c, 1.0}})),
                  DisconnectedSupportError);
}

TEST_CASE("Kantorovich dual lower bound") {
  // For any 1-Lipschitz f, W(mu, nu) >= sum f (mu - nu); distance-to-a-node is one.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_connected_graph(rng, 10, 8, 0.5, 2.0);
    std::vector<NodeId> all;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) all.push_back(NodeId{i});
    auto dist = pairwise_distances(g, all, all);
    auto pm = random_simplex(rng, all.size(), true);
    auto pn = random_simplex(rng, all.size(), true);
    std::vector<std::pair<NodeId, double>> m1, m2;
    for (std::size_t i = 0; i < all.size(); ++i) {
      m1.emplace_back(all[i], pm[i]);
      m2.emplace_back(all[i], pn[i]);
    }
    const double w = wasserstein(dist, make_measure(m1), make_measure(m2)).cost;
    for (std::size_t anchor = 0; anchor < all.size(); ++anchor) {
      double dual = 0.0;
      for (std::size_t i = 0; i < all.size(); ++i) dual += dist.at(anchor, i) * (pm[i] - pn[i]);
      CHECK(w >= std::abs(dual) - 1e-12);
    }
  }
}
