#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ricci {

/// Dense node index into the owning graph.
struct NodeId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Edge index. Stable across weight updates; a removed edge keeps its slot
/// as a tombstone, so ids are never reused.
struct EdgeId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(EdgeId, EdgeId) = default;
};

struct Edge {
  NodeId u;
  NodeId v;
  double weight = 1.0;
  bool live = true;

  NodeId other(NodeId x) const noexcept { return x == u ? v : u; }
};

struct Incidence {
  NodeId neighbor;
  EdgeId edge;
};

/// Undirected simple graph with positive edge weights.
///
/// Nodes carry optional string labels (edge-list inputs always provide them).
/// Removal tombstones the edge slot and drops it from both adjacency lists.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t node_count);

  /// Adds a node labelled `label`. Labels must be unique.
  NodeId add_node(std::string label);

  /// Throws ContractViolation on self-loops, duplicate live pairs, w <= 0,
  /// or out-of-range endpoints.
  EdgeId add_edge(NodeId u, NodeId v, double weight);

  void set_weight(EdgeId e, double weight);
  void remove_edge(EdgeId e);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t live_edge_count() const noexcept { return live_edges_; }
  /// Number of edge slots ever allocated, including removed ones.
  std::size_t edge_slot_count() const noexcept { return edges_.size(); }

  const Edge& edge(EdgeId e) const;
  bool is_live(EdgeId e) const;
  double weight(EdgeId e) const { return edge(e).weight; }

  std::span<const Incidence> incident(NodeId x) const;
  std::size_t degree(NodeId x) const { return incident(x).size(); }
  double weighted_degree(NodeId x) const;

  /// Live edges in ascending id order.
  std::vector<EdgeId> live_edges() const;
  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;
  double total_weight() const;

  bool has_labels() const noexcept { return !labels_.empty(); }
  /// The node's label, or its decimal index when the graph is unlabelled.
  std::string label(NodeId x) const;
  std::optional<NodeId> find_node(std::string_view label) const;

  /// Reorders every adjacency list by `less`. Traversal order only; the edge
  /// set and ids are unchanged.
  void permute_adjacency(const std::function<bool(const Incidence&, const Incidence&)>& less);

 private:
  void check_node(NodeId x) const;
  static std::uint64_t pair_key(NodeId u, NodeId v) noexcept;

  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeId> pair_index_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
  std::size_t live_edges_ = 0;
};

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Single-source shortest path lengths.
struct DistanceOracle {
  NodeId source;
  std::vector<double> dist;

  bool reachable(NodeId v) const { return dist[v.value] != kUnreachable; }
  double operator[](NodeId v) const { return dist[v.value]; }
};

struct LoadOptions {
  double default_weight = 1.0;
  /// Use default_weight for every edge even when a third column is present.
  bool ignore_weights = false;
  /// Skip "u u" rows instead of rejecting them.
  bool drop_self_loops = false;
};

/// Parses whitespace-separated "u v [w]" rows. '#' and '%' start comment lines.
/// Duplicate pairs keep the first weight. Throws ParseError.
WeightedGraph load_edge_list(std::string_view text, const LoadOptions& options = {});
WeightedGraph load_edge_list(std::string_view text, double default_weight);
WeightedGraph load_edge_list_file(const std::string& path, const LoadOptions& options = {});

/// Components in order of their smallest node id; each set sorted ascending.
std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g);

/// Induced subgraph on the largest component (ties: smallest minimum id).
WeightedGraph largest_connected_component(const WeightedGraph& g);

/// Induced subgraph. New node i corresponds to the i-th smallest member of
/// `nodes`; edges are added in ascending original id order.
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const NodeId> nodes);

/// Dijkstra over live weights, or breadth-first hop counts when `unit_weights`.
DistanceOracle shortest_path_distances(const WeightedGraph& g, NodeId source,
                                       bool unit_weights = false);

/// Dijkstra from `source` that stops once every node in `targets` is settled.
/// Returns distances aligned with `targets` (kUnreachable where disconnected).
std::vector<double> distances_to(const WeightedGraph& g, NodeId source,
                                 std::span<const NodeId> targets);

/// Hop-count BFS into `dist` (resized to n). `dist` doubles as scratch space.
void bfs_hops(const WeightedGraph& g, NodeId source, std::vector<std::int32_t>& dist);

}  // namespace ricci

template <>
struct std::hash<ricci::NodeId> {
  std::size_t operator()(ricci::NodeId x) const noexcept { return x.value; }
};
template <>
struct std::hash<ricci::EdgeId> {
  std::size_t operator()(ricci::EdgeId x) const noexcept { return x.value; }
};
