#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

enum class Centrality { Degree, Betweenness, Closeness, PageRank };

std::string_view to_string(Centrality c);
std::optional<Centrality> parse_centrality(std::string_view name);
inline constexpr Centrality kAllCentralities[] = {Centrality::Degree, Centrality::Betweenness,
                                                  Centrality::Closeness, Centrality::PageRank};

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  // L1 change between rounds
  int max_rounds = 1000;
};

struct CentralityScores {
  Centrality method = Centrality::Degree;
  std::vector<double> scores;  // by node id
};

/// All centralities treat g as unweighted.
std::vector<double> degree_centrality(const WeightedGraph& g);

/// Brandes accumulation over hop-count shortest paths, normalised by
/// (n-1)(n-2)/2. The parallel path reduces per-block partial sums in block
/// order, so its output does not depend on the thread count.
std::vector<double> betweenness_centrality(const WeightedGraph& g,
                                           Execution exec = Execution::Parallel);
inline std::vector<double> betweenness_centrality_serial(const WeightedGraph& g) {
  return betweenness_centrality(g, Execution::Serial);
}

/// (n-1) / sum of hop distances. Throws DomainError on a disconnected graph.
std::vector<double> closeness_centrality(const WeightedGraph& g,
                                         Execution exec = Execution::Parallel);

/// Power iteration; dangling mass is spread uniformly. Throws ConvergenceError.
std::vector<double> pagerank(const WeightedGraph& g, const PageRankOptions& options = {});

CentralityScores centrality(const WeightedGraph& g, Centrality method,
                            Execution exec = Execution::Parallel);

/// Greedy connected selection: seed at the best node, repeatedly add the best
/// node adjacent to the set (ties by smaller id). A stalled seed is retried
/// from the next best unused node. Returns ascending node ids.
std::vector<NodeId> connected_top_k(const WeightedGraph& g, const CentralityScores& scores,
                                    std::size_t k);

/// "label,score" rows sorted by score descending, then id.
void write_scores_csv(std::ostream& out, const WeightedGraph& g, const CentralityScores& scores);

}  // namespace ricci
