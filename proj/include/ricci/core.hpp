#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

struct CoreConfig {
  long iterations = 50;
  /// Fraction of edges removed after the flow, in [0, 1].
  double tau = 0.8;
  double step = 0.1;
  double alpha = 0.1;
  /// Target core size; floor(n/2) when unset.
  std::optional<std::size_t> core_budget;
  Execution execution = Execution::Parallel;
};

struct CoreResult {
  CoreConfig config;
  std::vector<NodeId> S;           // non-isolated after removal
  std::vector<NodeId> I;           // isolated after removal
  std::vector<NodeId> I_backfill;  // in backfill order
  std::vector<NodeId> C;           // S and I_backfill, sorted
  /// Nodes of the returned core, as ids of the input graph, ascending.
  std::vector<NodeId> core_nodes;
  /// Largest component of C induced on the input graph.
  WeightedGraph core;
  /// Edges removed in step 2, heaviest first.
  std::vector<EdgeId> removed_edges;
  /// Flow weights by edge slot after the last iteration.
  std::vector<double> final_weights;
};

void validate(const CoreConfig& config);

/// Flow, top-weight edge removal, isolated-node backfill and largest
/// component extraction. Throws ConfigError on invalid parameters and
/// propagates flow errors.
CoreResult detect_core(const WeightedGraph& g, const CoreConfig& config);

/// JSON object with core_nodes, core_edges, S, I_backfill, removed_edges and
/// the configuration. Labels come from `g`.
void write_core_json(std::ostream& out, const WeightedGraph& g, const CoreResult& result);

/// One core node label per line.
void write_core_nodes(std::ostream& out, const WeightedGraph& g, const CoreResult& result);

}  // namespace ricci
