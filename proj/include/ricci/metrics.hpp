#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

/// Mean over core nodes of (degree inside the induced core) / (degree in g).
/// Throws DomainError on an empty core or a core node of degree 0.
double core_cohesiveness(const WeightedGraph& g, std::span<const NodeId> core_nodes);

struct Stretch {
  /// Unset when no residual pair is connected.
  std::optional<double> r_s;
  std::size_t xi = 0;
};

/// Average over unordered residual pairs still connected after deleting the
/// core of (hop distance without the core) / (hop distance in g).
Stretch distance_stretch(const WeightedGraph& g, std::span<const NodeId> core_nodes,
                         Execution exec = Execution::Parallel);

inline Stretch distance_stretch_serial(const WeightedGraph& g,
                                       std::span<const NodeId> core_nodes) {
  return distance_stretch(g, core_nodes, Execution::Serial);
}

struct MetricsReport {
  double r_d = 0.0;
  Stretch stretch;
  std::size_t core_nodes = 0;
  std::size_t core_edges = 0;
};

MetricsReport evaluate_core(const WeightedGraph& g, std::span<const NodeId> core_nodes,
                            Execution exec = Execution::Parallel);

/// {r_d, r_s, r_s_valid, xi, core_nodes, core_edges}; r_s is null when invalid.
void write_metrics_json(std::ostream& out, const MetricsReport& report);

}  // namespace ricci
