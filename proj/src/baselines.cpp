#include "ricci/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>

#include "format.hpp"
#include "parallel.hpp"
#include "ricci/errors.hpp"

namespace ricci {

namespace {

constexpr struct {
  Centrality method;
  std::string_view name;
} kCentralityNames[] = {
    {Centrality::Degree, "degree"},
    {Centrality::Betweenness, "betweenness"},
    {Centrality::Closeness, "closeness"},
    {Centrality::PageRank, "pagerank"},
};

constexpr std::size_t kSourceBlock = 64;

// Single-source Brandes pass; adds dependencies of `s` into `acc`.
class BrandesPass {
 public:
  explicit BrandesPass(std::size_t n) : dist_(n), sigma_(n), delta_(n) { order_.reserve(n); }

  void run(const WeightedGraph& g, NodeId s, std::vector<double>& acc) {
    std::fill(dist_.begin(), dist_.end(), -1);
    std::fill(sigma_.begin(), sigma_.end(), 0.0);
    std::fill(delta_.begin(), delta_.end(), 0.0);
    order_.clear();
    dist_[s.value] = 0;
    sigma_[s.value] = 1.0;
    order_.push_back(s);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const NodeId x = order_[head];
      for (const auto& inc : g.incident(x)) {
        const auto y = inc.neighbor.value;
        if (dist_[y] < 0) {
          dist_[y] = dist_[x.value] + 1;
          order_.push_back(inc.neighbor);
        }
        if (dist_[y] == dist_[x.value] + 1) sigma_[y] += sigma_[x.value];
      }
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const auto w = it->value;
      for (const auto& inc : g.incident(*it)) {
        const auto v = inc.neighbor.value;
        if (dist_[v] == dist_[w] - 1) delta_[v] += sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
      }
      if (w != s.value) acc[w] += delta_[w];
    }
  }

 private:
  std::vector<std::int32_t> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<NodeId> order_;
};

}  // namespace

std::string_view to_string(Centrality c) {
  for (const auto& entry : kCentralityNames) {
    if (entry.method == c) return entry.name;
  }
  return "unknown";
}

std::optional<Centrality> parse_centrality(std::string_view name) {
  for (const auto& entry : kCentralityNames) {
    if (entry.name == name) return entry.method;
  }
  return std::nullopt;
}

std::vector<double> degree_centrality(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = static_cast<double>(g.degree(NodeId{i})) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> betweenness_centrality(const WeightedGraph& g, Execution exec) {
  const std::size_t n = g.node_count();
  const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
  std::vector<std::vector<double>> partial(blocks);
  detail::for_each_index(blocks, exec, [&](std::size_t b) {
    std::vector<double> acc(n, 0.0);
    BrandesPass pass(n);
    const std::size_t end = std::min(n, (b + 1) * kSourceBlock);
    for (std::size_t s = b * kSourceBlock; s < end; ++s) {
      pass.run(g, NodeId{static_cast<std::uint32_t>(s)}, acc);
    }
    partial[b] = std::move(acc);
  });
  std::vector<double> out(n, 0.0);
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < n; ++i) out[i] += acc[i];
  }
  if (n < 3) return std::vector<double>(n, 0.0);
  // Each unordered pair was counted from both ends.
  const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  for (double& x : out) x *= scale;
  return out;
}

std::vector<double> closeness_centrality(const WeightedGraph& g, Execution exec) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  detail::for_each_index(n, exec, [&](std::size_t i) {
    thread_local std::vector<std::int32_t> dist;
    bfs_hops(g, NodeId{static_cast<std::uint32_t>(i)}, dist);
    double total = 0.0;
    for (auto d : dist) {
      if (d < 0) throw DomainError("closeness centrality needs a connected graph");
      total += d;
    }
    out[i] = static_cast<double>(n - 1) / total;
  });
  return out;
}

std::vector<double> pagerank(const WeightedGraph& g, const PageRankOptions& options) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  const double nd = static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / nd);
  std::vector<double> next(n);
  for (int round = 0; round < options.max_rounds; ++round) {
    double dangling = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (g.degree(NodeId{i}) == 0) dangling += rank[i];
    }
    const double base = (1.0 - options.damping) / nd + options.damping * dangling / nd;
    // Pull formulation in ascending neighbour order keeps the result
    // independent of adjacency order.
    for (std::uint32_t i = 0; i < n; ++i) {
      thread_local std::vector<std::uint32_t> nbrs;
      nbrs.clear();
      for (const auto& inc : g.incident(NodeId{i})) nbrs.push_back(inc.neighbor.value);
      std::sort(nbrs.begin(), nbrs.end());
      double in = 0.0;
      for (auto j : nbrs) in += rank[j] / static_cast<double>(g.degree(NodeId{j}));
      next[i] = base + options.damping * in;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (change < options.tolerance) {
      const double total = std::accumulate(rank.begin(), rank.end(), 0.0);
      for (double& r : rank) r /= total;
      return rank;
    }
  }
  throw ConvergenceError("PageRank did not converge within " + std::to_string(options.max_rounds) +
                         " rounds");
}

CentralityScores centrality(const WeightedGraph& g, Centrality method, Execution exec) {
  CentralityScores out;
  out.method = method;
  switch (method) {
    case Centrality::Degree:
      out.scores = degree_centrality(g);
      break;
    case Centrality::Betweenness:
      out.scores = betweenness_centrality(g, exec);
      break;
    case Centrality::Closeness:
      out.scores = closeness_centrality(g, exec);
      break;
    case Centrality::PageRank:
      out.scores = pagerank(g);
      break;
  }
  return out;
}

std::vector<NodeId> connected_top_k(const WeightedGraph& g, const CentralityScores& scores,
                                    std::size_t k) {
  const std::size_t n = g.node_count();
  if (scores.scores.size() != n) throw ContractViolation("score vector does not match graph");
  if (k == 0 || k > n) throw DomainError("group size must lie in [1, n]");

  auto better = [&scores](NodeId a, NodeId b) {
    const double sa = scores.scores[a.value];
    const double sb = scores.scores[b.value];
    return sa != sb ? sa > sb : a < b;
  };
  std::vector<NodeId> ranking(n);
  for (std::uint32_t i = 0; i < n; ++i) ranking[i] = NodeId{i};
  std::sort(ranking.begin(), ranking.end(), better);

  std::vector<char> used_seed(n, 0);
  std::vector<NodeId> best;
  for (NodeId seed : ranking) {
    if (used_seed[seed.value]) continue;
    std::vector<char> in(n, 0);
    std::vector<NodeId> group;
    auto worse = [&better](NodeId a, NodeId b) { return better(b, a); };
    std::priority_queue<NodeId, std::vector<NodeId>, decltype(worse)> frontier(worse);
    frontier.push(seed);
    while (!frontier.empty() && group.size() < k) {
      const NodeId x = frontier.top();
      frontier.pop();
      if (in[x.value]) continue;
      in[x.value] = 1;
      used_seed[x.value] = 1;
      group.push_back(x);
      for (const auto& inc : g.incident(x)) {
        if (!in[inc.neighbor.value]) frontier.push(inc.neighbor);
      }
    }
    if (group.size() > best.size()) best = group;
    if (best.size() == k) break;
  }
  if (best.size() != k && n > 0) {
    // Unreachable on connected inputs.
    if (connected_components(g).size() == 1) {
      throw InvariantViolation("greedy expansion failed on a connected graph");
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

void write_scores_csv(std::ostream& out, const WeightedGraph& g, const CentralityScores& scores) {
  std::vector<NodeId> order(scores.scores.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = NodeId{i};
  std::stable_sort(order.begin(), order.end(), [&scores](NodeId a, NodeId b) {
    return scores.scores[a.value] > scores.scores[b.value];
  });
  out << "label,score\n";
  for (NodeId x : order) {
    out << g.label(x) << ',' << detail::format_number(scores.scores[x.value]) << '\n';
  }
}

}  // namespace ricci
