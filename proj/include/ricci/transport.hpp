#pragma once

#include <cstddef>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

/// Probability measure with finite support, stored sorted by node.
struct Measure {
  std::vector<std::pair<NodeId, double>> support;

  double mass(NodeId x) const;
  double total() const;
  std::vector<NodeId> nodes() const;
};

/// Builds a measure from (node, mass) pairs: merges repeats, drops zero
/// masses, sorts by node. Throws ContractViolation on negative mass or when
/// the total is not 1 within 1e-12.
Measure make_measure(std::vector<std::pair<NodeId, double>> masses);

/// Alpha-lazy one-step random walk from x: alpha stays at x, the rest spreads
/// over neighbours proportionally to edge weight.
Measure lazy_measure(const WeightedGraph& g, NodeId x, double alpha);

struct Flow {
  NodeId from;
  NodeId to;
  double mass;
};

struct TransportPlan {
  std::vector<Flow> flows;
  double cost = 0.0;
};

/// Dense distance matrix between an ordered row set and column set.
struct PairwiseDistances {
  std::vector<NodeId> rows;
  std::vector<NodeId> cols;
  std::vector<double> d;  // row-major, rows.size() x cols.size()

  double at(std::size_t i, std::size_t j) const { return d[i * cols.size() + j]; }
};

/// One targeted Dijkstra per node of the smaller of the two sets.
PairwiseDistances pairwise_distances(const WeightedGraph& g, std::vector<NodeId> rows,
                                     std::vector<NodeId> cols);

/// Solution of a dense transportation problem.
struct TransportSolution {
  double cost = 0.0;
  /// (row, col, amount) for every positive basic cell, row-major order.
  std::vector<std::tuple<std::size_t, std::size_t, double>> cells;
  std::size_t pivots = 0;
};

/// Exact transportation simplex (u-v method) on a p x q cost matrix.
///
/// Supplies and demands must be non-negative with equal totals (1e-9).
/// Starts from the north-west corner rule; pricing is most-negative reduced
/// cost with row-major tie-breaking, falling back to Bland's first-improving
/// rule after a run of degenerate pivots. Leaving-cell ties go to the
/// smallest (row, col). The result is a deterministic function of the input.
TransportSolution solve_transport(std::span<const double> supply,
                                  std::span<const double> demand,
                                  std::span<const double> cost);

/// Wasserstein-1 distance between mu1 and mu2 with the optimal plan.
/// Every support node of mu1 must be a row of `dist`, every support node of
/// mu2 a column. Throws DisconnectedSupportError on an infinite required
/// distance and ContractViolation on unbalanced or unknown supports.
TransportPlan wasserstein(const PairwiseDistances& dist, const Measure& mu1, const Measure& mu2);

}  // namespace ricci
