#include "ricci/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

#include "ricci/errors.hpp"

namespace ricci {

WeightedGraph::WeightedGraph(std::size_t node_count) : adjacency_(node_count) {}

NodeId WeightedGraph::add_node(std::string label) {
  if (labels_.size() < adjacency_.size()) {
    for (std::size_t i = labels_.size(); i < adjacency_.size(); ++i) {
      labels_.push_back(std::to_string(i));
      label_index_.emplace(labels_.back(), NodeId{static_cast<std::uint32_t>(i)});
    }
  }
  if (label_index_.contains(label)) {
    throw ContractViolation("duplicate node label '" + label + "'");
  }
  const NodeId id{static_cast<std::uint32_t>(adjacency_.size())};
  adjacency_.emplace_back();
  label_index_.emplace(label, id);
  labels_.push_back(std::move(label));
  return id;
}

std::uint64_t WeightedGraph::pair_key(NodeId u, NodeId v) noexcept {
  const auto lo = std::min(u.value, v.value);
  const auto hi = std::max(u.value, v.value);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

void WeightedGraph::check_node(NodeId x) const {
  if (x.value >= adjacency_.size()) {
    throw ContractViolation("node " + std::to_string(x.value) + " out of range");
  }
}

EdgeId WeightedGraph::add_edge(NodeId u, NodeId v, double weight) {
  check_node(u);
  check_node(v);
  if (u == v) throw ContractViolation("self-loop at node " + std::to_string(u.value));
  if (!(weight > 0.0)) throw ContractViolation("edge weight must be positive");
  const auto key = pair_key(u, v);
  if (pair_index_.contains(key)) {
    throw ContractViolation("duplicate edge " + std::to_string(u.value) + "-" +
                            std::to_string(v.value));
  }
  const EdgeId id{static_cast<std::uint32_t>(edges_.size())};
  edges_.push_back(Edge{u, v, weight, true});
  adjacency_[u.value].push_back({v, id});
  adjacency_[v.value].push_back({u, id});
  pair_index_.emplace(key, id);
  ++live_edges_;
  return id;
}

const Edge& WeightedGraph::edge(EdgeId e) const {
  if (e.value >= edges_.size()) {
    throw ContractViolation("edge " + std::to_string(e.value) + " out of range");
  }
  return edges_[e.value];
}

bool WeightedGraph::is_live(EdgeId e) const { return edge(e).live; }

void WeightedGraph::set_weight(EdgeId e, double weight) {
  const Edge& current = edge(e);
  if (!current.live) throw ContractViolation("weight update on removed edge");
  if (!(weight > 0.0)) {
    throw ContractViolation("edge " + std::to_string(e.value) + " weight must stay positive");
  }
  edges_[e.value].weight = weight;
}

void WeightedGraph::remove_edge(EdgeId e) {
  Edge& target = edges_.at(e.value);
  if (!target.live) return;
  target.live = false;
  for (NodeId end : {target.u, target.v}) {
    auto& list = adjacency_[end.value];
    std::erase_if(list, [e](const Incidence& inc) { return inc.edge == e; });
  }
  pair_index_.erase(pair_key(target.u, target.v));
  --live_edges_;
}

std::span<const Incidence> WeightedGraph::incident(NodeId x) const {
  check_node(x);
  return adjacency_[x.value];
}

double WeightedGraph::weighted_degree(NodeId x) const {
  double sum = 0.0;
  for (const auto& inc : incident(x)) sum += edges_[inc.edge.value].weight;
  return sum;
}

std::vector<EdgeId> WeightedGraph::live_edges() const {
  std::vector<EdgeId> out;
  out.reserve(live_edges_);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].live) out.push_back(EdgeId{i});
  }
  return out;
}

std::optional<EdgeId> WeightedGraph::find_edge(NodeId u, NodeId v) const {
  auto it = pair_index_.find(pair_key(u, v));
  if (it == pair_index_.end()) return std::nullopt;
  return it->second;
}

double WeightedGraph::total_weight() const {
  double sum = 0.0;
  for (const auto& e : edges_) {
    if (e.live) sum += e.weight;
  }
  return sum;
}

std::string WeightedGraph::label(NodeId x) const {
  check_node(x);
  if (x.value < labels_.size()) return labels_[x.value];
  return std::to_string(x.value);
}

std::optional<NodeId> WeightedGraph::find_node(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

void WeightedGraph::permute_adjacency(
    const std::function<bool(const Incidence&, const Incidence&)>& less) {
  for (auto& list : adjacency_) std::sort(list.begin(), list.end(), less);
}

// ---------------------------------------------------------------------------
// Ingestion

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

WeightedGraph load_edge_list(std::string_view text, const LoadOptions& options) {
  if (!(options.default_weight > 0.0)) throw ConfigError("default weight must be positive");
  WeightedGraph g;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto intern = [&g](std::string_view label) {
    if (auto found = g.find_node(label)) return *found;
    return g.add_node(std::string(label));
  };
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.front().front() == '#' || tokens.front().front() == '%') continue;
    if (tokens.size() < 2) throw ParseError(line_no, "expected 'u v [w]'");

    double w = options.default_weight;
    if (tokens.size() >= 3 && !options.ignore_weights) {
      const auto tok = tokens[2];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "non-numeric weight '" + std::string(tok) + "'");
      }
      if (!(w > 0.0)) throw ParseError(line_no, "weight must be positive");
    }
    if (tokens[0] == tokens[1]) {
      if (options.drop_self_loops) continue;
      throw ParseError(line_no, "self-loop on '" + std::string(tokens[0]) + "'");
    }
    const NodeId u = intern(tokens[0]);
    const NodeId v = intern(tokens[1]);
    if (!g.find_edge(u, v)) g.add_edge(u, v, w);
  }
  return g;
}

WeightedGraph load_edge_list(std::string_view text, double default_weight) {
  LoadOptions options;
  options.default_weight = default_weight;
  return load_edge_list(text, options);
}

WeightedGraph load_edge_list_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_edge_list(buffer.str(), options);
}

// ---------------------------------------------------------------------------
// Structure

std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const auto id = static_cast<std::int32_t>(out.size());
    out.emplace_back();
    comp[s] = id;
    stack.push_back(NodeId{s});
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      out.back().push_back(x);
      for (const auto& inc : g.incident(x)) {
        if (comp[inc.neighbor.value] < 0) {
          comp[inc.neighbor.value] = id;
          stack.push_back(inc.neighbor);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

WeightedGraph largest_connected_component(const WeightedGraph& g) {
  const auto comps = connected_components(g);
  if (comps.empty()) return WeightedGraph{};
  // Components arrive ordered by smallest member, so the first maximum wins ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    if (comps[i].size() > comps[best].size()) best = i;
  }
  return induced_subgraph(g, comps[best]);
}

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> members(nodes.begin(), nodes.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(g.node_count(), kAbsent);
  WeightedGraph sub;
  for (NodeId x : members) {
    if (x.value >= g.node_count()) throw ContractViolation("induced_subgraph: node out of range");
    remap[x.value] = sub.add_node(g.label(x)).value;
  }
  for (EdgeId e : g.live_edges()) {
    const Edge& edge = g.edge(e);
    const auto a = remap[edge.u.value];
    const auto b = remap[edge.v.value];
    if (a != kAbsent && b != kAbsent) sub.add_edge(NodeId{a}, NodeId{b}, edge.weight);
  }
  return sub;
}

// ---------------------------------------------------------------------------
// Distances

void bfs_hops(const WeightedGraph& g, NodeId source, std::vector<std::int32_t>& dist) {
  dist.assign(g.node_count(), -1);
  std::vector<NodeId> frontier{source};
  dist[source.value] = 0;
  std::size_t head = 0;
  while (head < frontier.size()) {
    const NodeId x = frontier[head++];
    const auto dx = dist[x.value];
    for (const auto& inc : g.incident(x)) {
      if (dist[inc.neighbor.value] < 0) {
        dist[inc.neighbor.value] = dx + 1;
        frontier.push_back(inc.neighbor);
      }
    }
  }
}

DistanceOracle shortest_path_distances(const WeightedGraph& g, NodeId source,
                                       bool unit_weights) {
  if (source.value >= g.node_count()) throw ContractViolation("source out of range");
  DistanceOracle out{source, std::vector<double>(g.node_count(), kUnreachable)};
  if (unit_weights) {
    std::vector<std::int32_t> hops;
    bfs_hops(g, source, hops);
    for (std::size_t i = 0; i < hops.size(); ++i) {
      if (hops[i] >= 0) out.dist[i] = hops[i];
    }
    return out;
  }
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  out.dist[source.value] = 0.0;
  heap.emplace(0.0, source.value);
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > out.dist[x]) continue;
    for (const auto& inc : g.incident(NodeId{x})) {
      const double nd = d + g.weight(inc.edge);
      if (nd < out.dist[inc.neighbor.value]) {
        out.dist[inc.neighbor.value] = nd;
        heap.emplace(nd, inc.neighbor.value);
      }
    }
  }
  return out;
}

namespace {

// Per-thread Dijkstra scratch. Entries are valid only when their stamp equals
// the current epoch, so a query costs time proportional to what it touches.
struct DijkstraScratch {
  std::vector<double> best;
  std::vector<std::uint32_t> seen_epoch;
  std::vector<std::uint32_t> done_epoch;
  std::vector<std::uint32_t> target_epoch;
  std::uint32_t epoch = 0;

  void prepare(std::size_t n) {
    if (best.size() < n) {
      best.resize(n);
      seen_epoch.resize(n, 0);
      done_epoch.resize(n, 0);
      target_epoch.resize(n, 0);
    }
    if (++epoch == 0) {
      std::fill(seen_epoch.begin(), seen_epoch.end(), 0);
      std::fill(done_epoch.begin(), done_epoch.end(), 0);
      std::fill(target_epoch.begin(), target_epoch.end(), 0);
      epoch = 1;
    }
  }
};

}  // namespace

std::vector<double> distances_to(const WeightedGraph& g, NodeId source,
                                 std::span<const NodeId> targets) {
  if (source.value >= g.node_count()) throw ContractViolation("source out of range");
  thread_local DijkstraScratch scratch;
  scratch.prepare(g.node_count());
  const std::uint32_t epoch = scratch.epoch;

  std::size_t remaining = 0;
  for (NodeId t : targets) {
    if (t.value >= g.node_count()) throw ContractViolation("target out of range");
    if (scratch.target_epoch[t.value] != epoch) {
      scratch.target_epoch[t.value] = epoch;
      ++remaining;
    }
  }

  using Item = std::pair<double, std::uint32_t>;
  std::vector<Item> heap;
  auto push = [&heap](double d, std::uint32_t x) {
    heap.emplace_back(d, x);
    std::push_heap(heap.begin(), heap.end(), std::greater<>{});
  };
  scratch.best[source.value] = 0.0;
  scratch.seen_epoch[source.value] = epoch;
  push(0.0, source.value);
  while (!heap.empty() && remaining > 0) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
    const auto [d, x] = heap.back();
    heap.pop_back();
    if (scratch.done_epoch[x] == epoch || d > scratch.best[x]) continue;
    scratch.done_epoch[x] = epoch;
    if (scratch.target_epoch[x] == epoch) --remaining;
    for (const auto& inc : g.incident(NodeId{x})) {
      const auto y = inc.neighbor.value;
      if (scratch.done_epoch[y] == epoch) continue;
      const double nd = d + g.weight(inc.edge);
      if (scratch.seen_epoch[y] != epoch || nd < scratch.best[y]) {
        scratch.seen_epoch[y] = epoch;
        scratch.best[y] = nd;
        push(nd, y);
      }
    }
  }
  std::vector<double> out;
  out.reserve(targets.size());
  for (NodeId t : targets) {
    out.push_back(scratch.done_epoch[t.value] == epoch ? scratch.best[t.value] : kUnreachable);
  }
  return out;
}

}  // namespace ricci
