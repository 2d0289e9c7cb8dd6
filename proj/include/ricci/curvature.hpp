#pragma once

#include <exception>
#include <string>
#include <variant>
#include <vector>

#include "ricci/errors.hpp"
#include "ricci/graph.hpp"

namespace ricci {

/// Ollivier curvature of the alpha-lazy walk.
struct Ollivier {
  double alpha = 0.0;
};

/// Lin-Lu-Yau curvature, the alpha -> 1 limit of kappa^alpha / (1 - alpha).
struct LinLuYau {};

using CurvatureKind = std::variant<Ollivier, LinLuYau>;

std::string describe(const CurvatureKind& kind);

struct EdgeCurvature {
  EdgeId edge;
  double kappa = 0.0;
  /// Shortest-path distance between the endpoints under current weights.
  double rho = 0.0;
  CurvatureKind kind;
};

/// Per-edge curvature over one frozen snapshot, ordered by edge id.
struct CurvatureField {
  long iteration = 0;
  std::vector<EdgeCurvature> entries;

  const EdgeCurvature& at(EdgeId e) const;
  double min_kappa() const;
  double max_kappa() const;
};

enum class Execution { Serial, Parallel };

/// A per-edge failure inside curvature_field, tagged with the edge.
class EdgeError : public Error {
 public:
  EdgeError(EdgeId edge, std::exception_ptr cause, const std::string& what)
      : Error(what), edge_(edge), cause_(std::move(cause)) {}
  EdgeId edge() const noexcept { return edge_; }
  const std::exception_ptr& cause() const noexcept { return cause_; }

 private:
  EdgeId edge_;
  std::exception_ptr cause_;
};

/// kappa = 1 - W(mu_x, mu_y) / rho for e = xy, with exact transport.
EdgeCurvature ollivier_curvature(const WeightedGraph& g, EdgeId e, double alpha);

/// Lin-Lu-Yau curvature from the finite-alpha quotient kappa^alpha/(1-alpha).
///
/// The quotient is evaluated at 0.995 and 0.9999. If the two agree within
/// 1e-6 (relative to max(1, |q|)) the 0.9999 value is returned; otherwise the
/// lower point is moved halfway toward the upper one, up to six times, before
/// NumericInstabilityError is raised with the last pair of quotients.
EdgeCurvature lly_curvature(const WeightedGraph& g, EdgeId e);

EdgeCurvature edge_curvature(const WeightedGraph& g, EdgeId e, const CurvatureKind& kind);

/// Curvature of every live edge. The parallel path evaluates edges
/// independently into preallocated slots, so results are bitwise identical
/// to the serial path regardless of thread count.
CurvatureField curvature_field(const WeightedGraph& g, const CurvatureKind& kind,
                               long iteration = 0, Execution exec = Execution::Parallel);

/// Serial reference for curvature_field.
inline CurvatureField curvature_field_serial(const WeightedGraph& g, const CurvatureKind& kind,
                                             long iteration = 0) {
  return curvature_field(g, kind, iteration, Execution::Serial);
}

/// rho_e for every live edge (one targeted Dijkstra each), indexed by edge slot;
/// removed slots hold 0.
std::vector<double> edge_distances(const WeightedGraph& g, Execution exec = Execution::Parallel);

/// Caps the OpenMP worker count (0 leaves the runtime default).
void set_thread_limit(int threads);

}  // namespace ricci
