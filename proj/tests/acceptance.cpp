// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails. `--datasets` runs the checks that need the
// published networks (looked up in RICCI_DATA_DIR).

#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "ricci/baselines.hpp"
#include "ricci/core.hpp"
#include "ricci/curvature.hpp"
#include "ricci/datasets.hpp"
#include "ricci/flow.hpp"
#include "ricci/metrics.hpp"
#include "ricci/suite.hpp"
#include "ricci/transport.hpp"

using namespace ricci;
using testing::edge;
using testing::load_example;
using testing::node;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

FlowConfig small_flow(long iterations) {
  FlowConfig cfg;
  cfg.step = 0.1;
  cfg.curvature = Ollivier{0.1};
  cfg.iterations = iterations;
  return cfg;
}

Outcome example_metrics() {
  auto g = load_example("seven_node");
  std::vector<NodeId> small{node(g, "x1"), node(g, "x2"), node(g, "x3")};
  std::vector<NodeId> big{node(g, "x3"), node(g, "x4"), node(g, "x5"), node(g, "x6"),
                          node(g, "x7")};
  const double rd1 = core_cohesiveness(g, small);
  const auto rs1 = distance_stretch(g, small);
  const double rd2 = core_cohesiveness(g, big);
  const auto rs2 = distance_stretch(g, big);
  const bool ok = near(rd1, 5.0 / 6.0, 1e-12) && rs1.r_s && near(*rs1.r_s, 13.0 / 12.0, 1e-12) &&
                  near(rd2, 9.0 / 10.0, 1e-12) && rs2.r_s && near(*rs2.r_s, 1.0, 1e-12);
  return {ok, "r_d=" + fmt(rd1) + "," + fmt(rd2) + " r_s=" + fmt(rs1.r_s.value_or(NAN)) + "," +
                  fmt(rs2.r_s.value_or(NAN))};
}

Outcome star_step() {
  auto traj = run_flow(load_example("star"), small_flow(1));
  double worst = 0.0;
  for (EdgeId e : traj.final_graph.live_edges()) {
    worst = std::max(worst, std::abs(traj.final_graph.weight(e) - 0.98));
  }
  return {traj.final_graph.live_edge_count() == 6 && worst <= 1e-9,
          "max |w - 0.98| = " + fmt(worst)};
}

Outcome hub_step() {
  auto traj = run_flow(load_example("hub_triangles"), small_flow(1));
  const auto& g = traj.final_graph;
  double worst_outer = 0.0;
  double worst_spoke = 0.0;
  int outer = 0;
  int spokes = 0;
  const NodeId hub = node(g, "x0");
  for (EdgeId e : g.live_edges()) {
    const auto& ed = g.edge(e);
    if (ed.u == hub || ed.v == hub) {
      ++spokes;
      worst_spoke = std::max(worst_spoke, std::abs(ed.weight - 1.00125));
    } else {
      ++outer;
      worst_outer = std::max(worst_outer, std::abs(ed.weight - 0.935));
    }
  }
  return {outer == 4 && spokes == 8 && worst_outer <= 1e-9 && worst_spoke <= 1e-9,
          std::to_string(outer) + " outer (err " + fmt(worst_outer) + "), " +
              std::to_string(spokes) + " spokes (err " + fmt(worst_spoke) + ")"};
}

Outcome small_graph_orderings() {
  auto one = run_flow(load_example("triangle_spokes"), small_flow(1)).final_graph;
  const double t12 = one.weight(edge(one, "x1", "x2"));
  const double t23 = one.weight(edge(one, "x2", "x3"));
  const double t13 = one.weight(edge(one, "x1", "x3"));
  bool ok1 = t12 == t23 && t23 == t13;
  for (const char* leaf : {"x4", "x5", "x6"}) {
    const double w = one.weight(one.incident(node(one, leaf))[0].edge);
    ok1 = ok1 && t12 < w && w < 1.0;
  }

  auto two = run_flow(load_example("two_triangles"), small_flow(5)).final_graph;
  const EdgeId bridge = edge(two, "x3", "x4");
  bool ok2 = two.weight(bridge) > 1.0;
  for (EdgeId e : two.live_edges()) {
    if (e != bridge) ok2 = ok2 && two.weight(e) < two.weight(bridge);
  }
  return {ok1 && ok2, "triangle " + fmt(t12) + ", bridge after 5 steps " + fmt(two.weight(bridge))};
}

Outcome transport_oracle() {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  std::uniform_real_distribution<double> alpha(0.0, 0.99);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = size(rng);
    std::uniform_int_distribution<std::size_t> chords(0, n);
    auto g = testing::random_connected_graph(rng, n, chords(rng), 0.5, 2.0);
    const auto edges = g.live_edges();
    const EdgeId e = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
    const double a = alpha(rng);
    const auto& ed = g.edge(e);
    const auto mu = lazy_measure(g, ed.u, a);
    const auto nu = lazy_measure(g, ed.v, a);
    const auto dist = pairwise_distances(g, mu.nodes(), nu.nodes());
    std::vector<double> supply, demand;
    for (const auto& [x, m] : mu.support) supply.push_back(m);
    for (const auto& [x, m] : nu.support) demand.push_back(m);
    const double primary = wasserstein(dist, mu, nu).cost;
    const double oracle = testing::transport_cost_ssp(supply, demand, dist.d);
    worst = std::max(worst, std::abs(primary - oracle));
  }
  return {worst <= 1e-8, "200 instances, max |W - W_ssp| = " + fmt(worst)};
}

EnvelopeSuiteResult& suite() {
  static EnvelopeSuiteResult result = run_envelope_suite(EnvelopeSuiteConfig{});
  return result;
}

Outcome envelope_suite() {
  const auto& result = suite();
  return {result.runs.size() == 500 && result.ok(),
          std::to_string(result.runs.size()) + " runs, " +
              std::to_string(result.violation_count()) + " violations"};
}

Outcome iteration_budget_check() {
  const auto b = iteration_budget(1e-7, 1e7, 0.01, 100, 1.0, 100.0);
  return {b.underflow == 1603 && b.overflow == 16,
          "(" + std::to_string(b.underflow) + ", " + std::to_string(b.overflow) + ")"};
}

Outcome conservation() {
  const double worst = suite().max_normalized_conservation_error();
  return {worst <= 1e-9, "max relative change " + fmt(worst)};
}

std::string dataset_dir() {
  return data_directory(std::string(RICCI_SOURCE_DIR) + "/data");
}

Outcome dataset_ingestion() {
  const auto dir = dataset_dir();
  std::string detail;
  bool ok = true;
  for (const auto& spec : known_datasets()) {
    const auto path = dir + "/" + std::string(spec.file);
    if (!std::filesystem::exists(path)) {
      ok = false;
      detail += std::string(spec.name) + ": missing " + path + "; ";
      continue;
    }
    const auto g = load_dataset(spec, dir);
    const bool match = g.node_count() == spec.n && g.live_edge_count() == spec.m;
    ok = ok && match;
    detail += std::string(spec.name) + ": (" + std::to_string(g.node_count()) + ", " +
              std::to_string(g.live_edge_count()) + ")" + (match ? "" : " expected (" +
              std::to_string(spec.n) + ", " + std::to_string(spec.m) + ")") + "; ";
  }
  return {ok, detail};
}

Outcome cora_end_to_end() {
  const auto* spec = find_dataset("cora");
  const auto dir = dataset_dir();
  const auto path = dir + "/" + std::string(spec->file);
  if (!std::filesystem::exists(path)) return {false, "missing " + path};
  const auto g = load_dataset(*spec, dir);
  CoreConfig cfg;
  cfg.iterations = 50;
  cfg.alpha = 0.8;
  cfg.step = 0.1;
  cfg.tau = 0.8;
  const auto core = detect_core(g, cfg);
  const auto k = core.core_nodes.size();
  const auto flow = evaluate_core(g, core.core_nodes);
  auto baseline_rd = [&](Centrality method) {
    return core_cohesiveness(g, connected_top_k(g, centrality(g, method), k));
  };
  const double degree_rd = baseline_rd(Centrality::Degree);
  const double pagerank_rd = baseline_rd(Centrality::PageRank);
  const double rs = flow.stretch.r_s.value_or(0.0);
  const bool ok = std::abs(static_cast<double>(k) - 894.0) <= 0.05 * 894.0 && flow.r_d >= 0.72 &&
                  rs >= 1.5 && flow.r_d > degree_rd && flow.r_d > pagerank_rd;
  return {ok, "core " + std::to_string(k) + ", r_d " + fmt(flow.r_d) + ", r_s " + fmt(rs) +
                  ", degree r_d " + fmt(degree_rd) + ", pagerank r_d " + fmt(pagerank_rd)};
}

}  // namespace

int main(int argc, char** argv) {
  const bool datasets = argc > 1 && std::strcmp(argv[1], "--datasets") == 0;
  std::vector<std::pair<int, std::function<Outcome()>>> criteria;
  if (datasets) {
    criteria = {{8, dataset_ingestion}, {9, cora_end_to_end}};
  } else {
    criteria = {{1, example_metrics},  {2, star_step},        {3, hub_step},
                {4, small_graph_orderings}, {5, transport_oracle}, {6, envelope_suite},
                {7, iteration_budget_check}, {10, conservation}};
  }
  int failures = 0;
  for (const auto& [id, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& ex) {
      outcome = {false, std::string("exception: ") + ex.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << outcome.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
