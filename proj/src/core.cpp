#include "ricci/core.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "ricci/errors.hpp"
#include "ricci/flow.hpp"

namespace ricci {

void validate(const CoreConfig& config) {
  if (config.iterations < 0) throw ConfigError("iteration count must be non-negative");
  if (!(config.tau >= 0.0 && config.tau <= 1.0)) throw ConfigError("removal fraction must lie in [0, 1]");
  if (!(config.alpha >= 0.0 && config.alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
  if (!(config.step > 0.0 && config.step < 1.0)) throw ConfigError("step size must lie in (0, 1)");
}

CoreResult detect_core(const WeightedGraph& g, const CoreConfig& config) {
  validate(config);
  const std::size_t n = g.node_count();
  if (n == 0) throw EmptyGraphError("core detection needs a non-empty graph");

  CoreResult result;
  result.config = config;

  FlowConfig flow;
  flow.variant = FlowVariant::RhoDriven;
  flow.step = config.step;
  flow.curvature = Ollivier{config.alpha};
  flow.iterations = config.iterations;
  flow.record_snapshots = false;
  flow.execution = config.execution;
  auto trajectory = run_flow(g, flow);
  WeightedGraph& flowed = trajectory.final_graph;

  auto order = flowed.live_edges();
  std::stable_sort(order.begin(), order.end(), [&flowed](EdgeId a, EdgeId b) {
    return flowed.weight(a) > flowed.weight(b);
  });
  result.final_weights.assign(flowed.edge_slot_count(), 0.0);
  for (EdgeId e : order) result.final_weights[e.value] = flowed.weight(e);

  const auto remove_count =
      static_cast<std::size_t>(std::floor(config.tau * static_cast<double>(order.size())));
  result.removed_edges.assign(order.begin(), order.begin() + static_cast<long>(remove_count));
  for (EdgeId e : result.removed_edges) flowed.remove_edge(e);

  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeId x{i};
    (flowed.degree(x) > 0 ? result.S : result.I).push_back(x);
  }

  const std::size_t budget = config.core_budget.value_or(n / 2);
  auto ranked = result.I;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&g](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  const std::size_t take = budget > result.S.size() ? budget - result.S.size() : 0;
  result.I_backfill.assign(ranked.begin(),
                           ranked.begin() + static_cast<long>(std::min(take, ranked.size())));

  result.C = result.S;
  result.C.insert(result.C.end(), result.I_backfill.begin(), result.I_backfill.end());
  std::sort(result.C.begin(), result.C.end());

  if (result.C.empty()) {
    result.core = WeightedGraph{};
    return result;
  }
  const WeightedGraph induced = induced_subgraph(g, result.C);
  const auto components = connected_components(induced);
  const auto* largest = &components.front();
  for (const auto& comp : components) {
    if (comp.size() > largest->size()) largest = &comp;
  }
  for (NodeId local : *largest) result.core_nodes.push_back(result.C[local.value]);
  result.core = induced_subgraph(g, result.core_nodes);
  return result;
}

namespace {

nlohmann::json labels(const WeightedGraph& g, const std::vector<NodeId>& nodes) {
  auto out = nlohmann::json::array();
  for (NodeId x : nodes) out.push_back(g.label(x));
  return out;
}

}  // namespace

void write_core_json(std::ostream& out, const WeightedGraph& g, const CoreResult& result) {
  nlohmann::ordered_json doc;
  doc["core_nodes"] = labels(g, result.core_nodes);
  auto edges = nlohmann::json::array();
  for (EdgeId e : result.core.live_edges()) {
    const Edge& edge = result.core.edge(e);
    edges.push_back({result.core.label(edge.u), result.core.label(edge.v), edge.weight});
  }
  doc["core_edges"] = edges;
  doc["S"] = labels(g, result.S);
  doc["I_backfill"] = labels(g, result.I_backfill);
  auto removed = nlohmann::json::array();
  for (EdgeId e : result.removed_edges) {
    const Edge& edge = g.edge(e);
    removed.push_back({g.label(edge.u), g.label(edge.v)});
  }
  doc["removed_edges"] = removed;
  const auto& c = result.config;
  doc["config"] = {{"iterations", c.iterations}, {"tau", c.tau},     {"step", c.step},
                   {"alpha", c.alpha},           {"core_budget", nullptr}};
  if (c.core_budget) doc["config"]["core_budget"] = *c.core_budget;
  out << doc.dump(2) << '\n';
}

void write_core_nodes(std::ostream& out, const WeightedGraph& g, const CoreResult& result) {
  for (NodeId x : result.core_nodes) out << g.label(x) << '\n';
}

}  // namespace ricci
