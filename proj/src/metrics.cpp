#include "ricci/metrics.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "ricci/errors.hpp"

namespace ricci {

namespace {

std::vector<char> membership(const WeightedGraph& g, std::span<const NodeId> nodes) {
  std::vector<char> in(g.node_count(), 0);
  for (NodeId x : nodes) {
    if (x.value >= g.node_count()) throw ContractViolation("core node out of range");
    in[x.value] = 1;
  }
  return in;
}

// Hop-count BFS that skips nodes marked in `blocked`.
void bfs_avoiding(const WeightedGraph& g, NodeId source, const std::vector<char>& blocked,
                  std::vector<std::int32_t>& dist, std::vector<NodeId>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source.value] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId x = queue[head];
    for (const auto& inc : g.incident(x)) {
      const auto y = inc.neighbor.value;
      if (blocked[y] || dist[y] >= 0) continue;
      dist[y] = dist[x.value] + 1;
      queue.push_back(inc.neighbor);
    }
  }
}

struct Partial {
  double sum = 0.0;
  std::size_t pairs = 0;
};

}  // namespace

double core_cohesiveness(const WeightedGraph& g, std::span<const NodeId> core_nodes) {
  if (core_nodes.empty()) throw DomainError("cohesiveness of an empty core is undefined");
  const auto in = membership(g, core_nodes);
  std::vector<NodeId> unique(core_nodes.begin(), core_nodes.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  double total = 0.0;
  for (NodeId x : unique) {
    const auto deg = g.degree(x);
    if (deg == 0) {
      throw DomainError("core node " + g.label(x) + " has degree 0");
    }
    std::size_t inside = 0;
    for (const auto& inc : g.incident(x)) inside += in[inc.neighbor.value] ? 1 : 0;
    total += static_cast<double>(inside) / static_cast<double>(deg);
  }
  return total / static_cast<double>(unique.size());
}

Stretch distance_stretch(const WeightedGraph& g, std::span<const NodeId> core_nodes,
                         Execution exec) {
  const auto blocked = membership(g, core_nodes);
  const std::vector<char> none(g.node_count(), 0);
  std::vector<NodeId> residual;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    if (!blocked[i]) residual.push_back(NodeId{i});
  }

  std::vector<Partial> partial(residual.size());
  const long count = static_cast<long>(residual.size());
  const bool parallel = exec == Execution::Parallel;
#pragma omp parallel if (parallel)
  {
    std::vector<std::int32_t> full(g.node_count());
    std::vector<std::int32_t> cut(g.node_count());
    std::vector<NodeId> queue;
#pragma omp for schedule(dynamic, 4)
    for (long i = 0; i < count; ++i) {
      const NodeId u = residual[static_cast<std::size_t>(i)];
      bfs_avoiding(g, u, none, full, queue);
      bfs_avoiding(g, u, blocked, cut, queue);
      Partial p;
      for (std::size_t k = static_cast<std::size_t>(i) + 1; k < residual.size(); ++k) {
        const auto v = residual[k].value;
        if (cut[v] < 0) continue;
        p.sum += static_cast<double>(cut[v]) / static_cast<double>(full[v]);
        ++p.pairs;
      }
      partial[static_cast<std::size_t>(i)] = p;
    }
  }

  Stretch out;
  double sum = 0.0;
  for (const auto& p : partial) {
    sum += p.sum;
    out.xi += p.pairs;
  }
  if (out.xi > 0) out.r_s = sum / static_cast<double>(out.xi);
  return out;
}

MetricsReport evaluate_core(const WeightedGraph& g, std::span<const NodeId> core_nodes,
                            Execution exec) {
  MetricsReport report;
  report.r_d = core_cohesiveness(g, core_nodes);
  report.stretch = distance_stretch(g, core_nodes, exec);
  const auto in = membership(g, core_nodes);
  report.core_nodes = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
  for (EdgeId e : g.live_edges()) {
    const Edge& edge = g.edge(e);
    if (in[edge.u.value] && in[edge.v.value]) ++report.core_edges;
  }
  return report;
}

void write_metrics_json(std::ostream& out, const MetricsReport& report) {
  nlohmann::ordered_json doc;
  doc["r_d"] = report.r_d;
  doc["r_s"] = report.stretch.r_s ? nlohmann::ordered_json(*report.stretch.r_s) : nullptr;
  doc["r_s_valid"] = report.stretch.r_s.has_value();
  doc["xi"] = report.stretch.xi;
  doc["core_nodes"] = report.core_nodes;
  doc["core_edges"] = report.core_edges;
  out << doc.dump(2) << '\n';
}

}  // namespace ricci
