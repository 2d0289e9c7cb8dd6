#include "ricci/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "ricci/transport.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ricci {

std::string describe(const CurvatureKind& kind) {
  if (const auto* o = std::get_if<Ollivier>(&kind)) {
    std::ostringstream out;
    out << "ollivier(alpha=" << o->alpha << ")";
    return out.str();
  }
  return "lin-lu-yau";
}

const EdgeCurvature& CurvatureField::at(EdgeId e) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), e,
                             [](const EdgeCurvature& c, EdgeId key) { return c.edge < key; });
  if (it == entries.end() || it->edge != e) {
    throw ContractViolation("edge " + std::to_string(e.value) + " not in curvature field");
  }
  return *it;
}

double CurvatureField::min_kappa() const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& c : entries) out = std::min(out, c.kappa);
  return out;
}

double CurvatureField::max_kappa() const {
  double out = -std::numeric_limits<double>::infinity();
  for (const auto& c : entries) out = std::max(out, c.kappa);
  return out;
}

namespace {

std::vector<NodeId> closed_neighbourhood(const WeightedGraph& g, NodeId x) {
  std::vector<NodeId> out{x};
  for (const auto& inc : g.incident(x)) out.push_back(inc.neighbor);
  std::sort(out.begin(), out.end());
  return out;
}

// Distances between the closed neighbourhoods of an edge's endpoints; enough
// for every lazy-walk transport problem on that edge, whatever alpha is.
class EdgeTransport {
 public:
  EdgeTransport(const WeightedGraph& g, EdgeId e) : g_(g), edge_(g.edge(e)) {
    if (!edge_.live) throw ContractViolation("curvature requested on removed edge");
    dist_ = pairwise_distances(g, closed_neighbourhood(g, edge_.u),
                               closed_neighbourhood(g, edge_.v));
    const auto xi = std::find(dist_.rows.begin(), dist_.rows.end(), edge_.u) - dist_.rows.begin();
    const auto yi = std::find(dist_.cols.begin(), dist_.cols.end(), edge_.v) - dist_.cols.begin();
    rho_ = dist_.at(static_cast<std::size_t>(xi), static_cast<std::size_t>(yi));
  }

  double rho() const { return rho_; }

  double transport_cost(double alpha) const {
    return wasserstein(dist_, lazy_measure(g_, edge_.u, alpha), lazy_measure(g_, edge_.v, alpha))
        .cost;
  }

  double ollivier(double alpha) const { return 1.0 - transport_cost(alpha) / rho_; }

 private:
  const WeightedGraph& g_;
  Edge edge_;
  PairwiseDistances dist_;
  double rho_ = 0.0;
};

constexpr double kLlyLow = 0.995;
constexpr double kLlyHigh = 0.9999;
constexpr double kLlyAgreement = 1e-6;
constexpr int kLlyRefinements = 6;

}  // namespace

EdgeCurvature ollivier_curvature(const WeightedGraph& g, EdgeId e, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ContractViolation("Ollivier alpha must lie in [0, 1)");
  const EdgeTransport transport(g, e);
  return EdgeCurvature{e, transport.ollivier(alpha), transport.rho(), Ollivier{alpha}};
}

EdgeCurvature lly_curvature(const WeightedGraph& g, EdgeId e) {
  const EdgeTransport transport(g, e);
  auto quotient = [&transport](double alpha) {
    return transport.ollivier(alpha) / (1.0 - alpha);
  };
  double low = kLlyLow;
  const double q_high = quotient(kLlyHigh);
  double q_low = quotient(low);
  for (int refinement = 0;; ++refinement) {
    if (std::abs(q_low - q_high) <= kLlyAgreement * std::max(1.0, std::abs(q_high))) {
      return EdgeCurvature{e, q_high, transport.rho(), LinLuYau{}};
    }
    if (refinement == kLlyRefinements) break;
    low = 0.5 * (low + kLlyHigh);
    q_low = quotient(low);
  }
  std::ostringstream what;
  what.precision(17);
  what << "Lin-Lu-Yau quotient did not stabilise on edge " << e.value << ": " << q_low << " vs "
       << q_high;
  throw NumericInstabilityError(what.str(), q_low, q_high);
}

EdgeCurvature edge_curvature(const WeightedGraph& g, EdgeId e, const CurvatureKind& kind) {
  if (const auto* o = std::get_if<Ollivier>(&kind)) return ollivier_curvature(g, e, o->alpha);
  return lly_curvature(g, e);
}

CurvatureField curvature_field(const WeightedGraph& g, const CurvatureKind& kind, long iteration,
                               Execution exec) {
  const auto edges = g.live_edges();
  CurvatureField field;
  field.iteration = iteration;
  field.entries.resize(edges.size());
  detail::for_each_index(edges.size(), exec, [&](std::size_t i) {
    try {
      field.entries[i] = edge_curvature(g, edges[i], kind);
    } catch (const std::exception& ex) {
      throw EdgeError(edges[i], std::current_exception(),
                      "edge " + std::to_string(edges[i].value) + ": " + ex.what());
    }
  });
  return field;
}

std::vector<double> edge_distances(const WeightedGraph& g, Execution exec) {
  const auto edges = g.live_edges();
  std::vector<double> rho(g.edge_slot_count(), 0.0);
  detail::for_each_index(edges.size(), exec, [&](std::size_t i) {
    const Edge& edge = g.edge(edges[i]);
    const NodeId target[] = {edge.v};
    rho[edges[i].value] = distances_to(g, edge.u, target).front();
  });
  return rho;
}

void set_thread_limit(int threads) {
#if defined(_OPENMP)
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace ricci
