#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ricci::testing {

double transport_cost_ssp(std::span<const double> supply, std::span<const double> demand,
                          std::span<const double> cost) {
  const std::size_t p = supply.size();
  const std::size_t q = demand.size();
  // Nodes: 0 source, 1..p rows, p+1..p+q cols, p+q+1 sink.
  const std::size_t n = p + q + 2;
  const std::size_t sink = n - 1;
  struct Arc {
    std::size_t to;
    double cap;
    double cost;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> net(n);
  auto add = [&net](std::size_t a, std::size_t b, double cap, double c) {
    net[a].push_back({b, cap, c, net[b].size()});
    net[b].push_back({a, 0.0, -c, net[a].size() - 1});
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    add(0, 1 + i, supply[i], 0.0);
    total += supply[i];
  }
  for (std::size_t j = 0; j < q; ++j) add(1 + p + j, sink, demand[j], 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      if (!std::isfinite(cost[i * q + j])) throw std::runtime_error("oracle: infinite cost");
      add(1 + i, 1 + p + j, kInf, cost[i * q + j]);
    }
  }

  constexpr double kEps = 1e-15;
  double shipped = 0.0;
  double result = 0.0;
  while (shipped < total - 1e-13) {
    std::vector<double> dist(n, kInf);
    std::vector<std::size_t> prev_node(n, n);
    std::vector<std::size_t> prev_arc(n, 0);
    dist[0] = 0.0;
    for (std::size_t round = 0; round + 1 < n; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < n; ++a) {
        if (dist[a] == kInf) continue;
        for (std::size_t k = 0; k < net[a].size(); ++k) {
          const Arc& arc = net[a][k];
          if (arc.cap <= kEps) continue;
          if (dist[a] + arc.cost < dist[arc.to] - 1e-15) {
            dist[arc.to] = dist[a] + arc.cost;
            prev_node[arc.to] = a;
            prev_arc[arc.to] = k;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == kInf) break;
    double push = total - shipped;
    for (std::size_t v = sink; v != 0; v = prev_node[v]) {
      push = std::min(push, net[prev_node[v]][prev_arc[v]].cap);
    }
    for (std::size_t v = sink; v != 0; v = prev_node[v]) {
      Arc& arc = net[prev_node[v]][prev_arc[v]];
      arc.cap -= push;
      net[v][arc.rev].cap += push;
    }
    shipped += push;
    result += push * dist[sink];
  }
  return result;
}

std::vector<std::vector<double>> floyd_warshall(const WeightedGraph& g, bool unit_weights) {
  const std::size_t n = g.node_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (std::size_t e = 0; e < g.edge_slot_count(); ++e) {
    const Edge& edge = g.edge(EdgeId{static_cast<std::uint32_t>(e)});
    if (!edge.live) continue;
    const double w = unit_weights ? 1.0 : edge.weight;
    d[edge.u.value][edge.v.value] = std::min(d[edge.u.value][edge.v.value], w);
    d[edge.v.value][edge.u.value] = std::min(d[edge.v.value][edge.u.value], w);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

namespace {

// Every shortest path from s to t as a node sequence, by DFS along edges that
// keep the hop count on a geodesic.
void enumerate_paths(const WeightedGraph& g, const std::vector<std::vector<double>>& d,
                     std::size_t s, std::size_t t, std::vector<std::size_t>& path,
                     std::vector<std::vector<std::size_t>>& out) {
  const std::size_t cur = path.back();
  if (cur == t) {
    out.push_back(path);
    return;
  }
  for (const auto& inc : g.incident(NodeId{static_cast<std::uint32_t>(cur)})) {
    const std::size_t nxt = inc.neighbor.value;
    if (d[s][nxt] == d[s][cur] + 1.0 && d[s][nxt] + d[nxt][t] == d[s][t]) {
      path.push_back(nxt);
      enumerate_paths(g, d, s, t, path, out);
      path.pop_back();
    }
  }
}

}  // namespace

std::vector<double> betweenness_by_enumeration(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  const auto d = floyd_warshall(g, true);
  std::vector<double> score(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (!std::isfinite(d[s][t])) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> path{s};
      enumerate_paths(g, d, s, t, path, paths);
      for (const auto& pth : paths) {
        for (std::size_t k = 1; k + 1 < pth.size(); ++k) {
          score[pth[k]] += 1.0 / static_cast<double>(paths.size());
        }
      }
    }
  }
  if (n > 2) {
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (double& x : score) x /= norm;
  }
  return score;
}

std::pair<double, std::size_t> stretch_by_floyd(const WeightedGraph& g,
                                                std::span<const NodeId> core) {
  const std::size_t n = g.node_count();
  std::vector<char> in_core(n, 0);
  for (NodeId x : core) in_core[x.value] = 1;
  std::vector<NodeId> residual;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!in_core[i]) residual.push_back(NodeId{i});
  }
  const auto full = floyd_warshall(g, true);
  const auto rest = floyd_warshall(induced_subgraph(g, residual), true);
  double sum = 0.0;
  std::size_t xi = 0;
  for (std::size_t a = 0; a < residual.size(); ++a) {
    for (std::size_t b = a + 1; b < residual.size(); ++b) {
      if (!std::isfinite(rest[a][b])) continue;
      sum += rest[a][b] / full[residual[a].value][residual[b].value];
      ++xi;
    }
  }
  if (xi == 0) return {std::numeric_limits<double>::quiet_NaN(), 0};
  return {sum / static_cast<double>(xi), xi};
}

WeightedGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, std::size_t extra,
                                     double wmin, double wmax) {
  WeightedGraph g(n);
  std::uniform_real_distribution<double> weight(wmin, wmax);
  auto draw = [&]() { return wmin == wmax ? wmin : weight(rng); };
  for (std::uint32_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::uint32_t> pick(0, i - 1);
    g.add_edge(NodeId{i}, NodeId{pick(rng)}, draw());
  }
  if (n >= 2) {
    std::uniform_int_distribution<std::uint32_t> node(0, static_cast<std::uint32_t>(n - 1));
    const std::size_t max_edges = n * (n - 1) / 2;
    for (std::size_t k = 0; k < extra && g.live_edge_count() < max_edges; ++k) {
      const NodeId a{node(rng)};
      const NodeId b{node(rng)};
      if (a == b || g.find_edge(a, b)) continue;
      g.add_edge(a, b, draw());
    }
  }
  return g;
}

}  // namespace ricci::testing
