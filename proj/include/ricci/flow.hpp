#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

/// Discrete curvature-flow update rules. With kappa, rho and w taken at
/// iteration j for every edge simultaneously:
///
///   RhoDriven        w' = w - s*kappa*rho
///   QuasiNormalized  w' = w + s*(-kappa + sum(kappa*rho)/sum(w))*rho
///   WeightDriven     w' = w - s*kappa*w
///   Normalized       w' = w + s*(-kappa + sum(kappa*w)/sum(w))*w
///   NiReset          w' = rho - s*kappa*rho
enum class FlowVariant { RhoDriven, QuasiNormalized, WeightDriven, Normalized, NiReset };

std::string_view to_string(FlowVariant v);
std::optional<FlowVariant> parse_variant(std::string_view name);
inline constexpr FlowVariant kAllVariants[] = {FlowVariant::RhoDriven,
                                               FlowVariant::QuasiNormalized,
                                               FlowVariant::WeightDriven, FlowVariant::Normalized,
                                               FlowVariant::NiReset};

struct FlowConfig {
  FlowVariant variant = FlowVariant::RhoDriven;
  double step = 0.1;
  CurvatureKind curvature = Ollivier{0.1};
  long iterations = 1;
  /// Surgery threshold theta > 1; applied after every step when set.
  std::optional<double> theta;
  /// Validate the step size and check every iterate against its envelope.
  bool envelope_check = false;
  /// Raise StepTooLargeError before writing any non-positive weight.
  bool positivity_guard = true;
  /// Keep per-iteration edge states (needed for trace export).
  bool record_snapshots = true;
  Execution execution = Execution::Parallel;
};

/// Upper end of the open interval (0, bound) in which the step size keeps the
/// flow well defined. `theta` is required for Normalized. Throws
/// EmptyGraphError when m == 0.
double step_size_bound(FlowVariant variant, const CurvatureKind& curvature, std::size_t m,
                       std::optional<double> theta = std::nullopt);

enum class UpperScale { PerEdgeInitial, SumOfInitial };

/// lower(j) = lower_factor^j * w0_e,
/// upper(j) = upper_factor^j * (w0_e or baseline_sum).
struct BoundEnvelope {
  double lower_factor = 1.0;
  double upper_factor = 1.0;
  UpperScale upper_scale = UpperScale::SumOfInitial;
  double baseline_sum = 0.0;
  /// Which weight estimate this envelope encodes, e.g. "2.1(i)".
  std::string label;
  /// Set for the NiReset rows: the upper bound follows the sum form that the
  /// derivation supports rather than a per-edge form.
  bool upper_from_derivation = false;

  double lower(long j, double w0) const;
  double upper(long j, double w0) const;
};

/// Envelope for the configured variant and curvature. m0 is the initial edge
/// count and w0 the initial live weights. Throws ConfigError when the step
/// size is outside step_size_bound or theta is missing where required.
BoundEnvelope envelope(const FlowConfig& config, std::size_t m0, std::span<const double> w0);

struct IterationBudget {
  long underflow = 0;  // no weight drops below eps0 for j <= underflow
  long overflow = 0;   // no weight exceeds the threshold for j <= overflow
};

/// floor(log(eps0/min w0)/log(1-s)) and floor(log(threshold/sum w0)/log(1+m*s)).
/// Requires 0 < eps0 < min w0, threshold >= sum w0, 0 < s < 1, m >= 1.
IterationBudget iteration_budget(double eps0, double threshold, double s, std::size_t m,
                                 double min_w0, double sum_w0);
IterationBudget iteration_budget(double eps0, double threshold, double s,
                                 std::span<const double> w0);

/// Simultaneous update of every live edge. Returns new weights indexed by edge
/// slot (removed slots 0). `iteration` only labels errors.
std::vector<double> flow_step(const WeightedGraph& g, const CurvatureField& field,
                              const FlowConfig& config, long iteration = 0);

/// Removes, in one batch, every live edge with w/rho > theta, ratios taken on
/// the pre-surgery snapshot. Returns the removed ids in ascending order.
std::vector<EdgeId> theta_surgery(WeightedGraph& g, double theta,
                                  Execution exec = Execution::Parallel);

struct EdgeState {
  EdgeId edge;
  double weight = 0.0;
  double kappa = 0.0;  // curvature that produced this weight; NaN at j = 0
  double rho = 0.0;
};

struct EnvelopeViolation {
  long iteration = 0;
  EdgeId edge;
  double weight = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct EnvelopeVerdict {
  bool checked = false;
  bool ok = true;
  /// min over edges of (w - lower)/lower and (upper - w)/upper.
  double min_lower_slack = 0.0;
  double min_upper_slack = 0.0;
  std::vector<EnvelopeViolation> violations;
};

struct IterationRecord {
  long iteration = 0;
  std::vector<EdgeState> edges;  // live edges after the step, before surgery
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  std::vector<EdgeId> removed;
  double total_weight = 0.0;  // after surgery
  /// |sum w' - sum w| / sum w across the step (before surgery).
  double conservation_error = 0.0;
  EnvelopeVerdict envelope;
};

struct FlowTrajectory {
  FlowConfig config;
  std::size_t initial_edge_count = 0;
  std::vector<double> initial_weights;  // by edge slot
  std::optional<BoundEnvelope> bound;
  /// (iteration, new baseline) whenever surgery re-based the sum baseline.
  std::vector<std::pair<long, double>> rebases;
  /// Entry 0 is the initial state; entry j follows the j-th step.
  std::vector<IterationRecord> records;
  long steps_applied = 0;
  WeightedGraph final_graph;

  bool envelope_ok() const;
  std::vector<EnvelopeViolation> violations() const;
};

/// N iterations of curvature -> step -> optional surgery -> optional envelope
/// check. Step errors carry the iteration index.
FlowTrajectory run_flow(WeightedGraph g, const FlowConfig& config);

/// CSV rows (iteration, edge_id, u_label, v_label, weight, kappa, rho,
/// removed_flag) for every recorded iteration.
void write_trace_csv(std::ostream& out, const FlowTrajectory& trajectory);

}  // namespace ricci
