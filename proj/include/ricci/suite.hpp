#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/flow.hpp"
#include "ricci/graph.hpp"

namespace ricci {

/// Random spanning tree on n nodes plus `extra` distinct chords, weights
/// uniform in [wmin, wmax].
WeightedGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, std::size_t extra,
                                     double wmin, double wmax);

struct EnvelopeSuiteConfig {
  std::uint64_t seed = 2024;
  int graphs = 50;
  long iterations = 30;
  /// Step size as a fraction of the validity bound.
  double step_fraction = 0.5;
  double theta = 4.0;
  double alpha = 0.5;
  std::size_t min_nodes = 6;
  std::size_t max_nodes = 14;
  std::optional<FlowVariant> variant;
  /// "ollivier" or "lly"; both when unset.
  std::optional<std::string> curvature;
  Execution execution = Execution::Parallel;
};

struct EnvelopeRun {
  FlowVariant variant;
  std::string curvature;
  std::string label;
  std::uint64_t graph_seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double step = 0.0;
  double min_lower_slack = 0.0;
  double min_upper_slack = 0.0;
  double max_conservation_error = 0.0;
  std::size_t surgeries = 0;
  std::vector<EnvelopeViolation> violations;
};

struct EnvelopeSuiteResult {
  std::vector<EnvelopeRun> runs;

  bool ok() const;
  std::size_t violation_count() const;
  /// Largest per-step relative change of total weight over Normalized runs.
  double max_normalized_conservation_error() const;
};

/// Every selected (variant, curvature) row on `graphs` random connected
/// graphs, each flowed with the envelope check on. Weights start in
/// [0.5, 0.5 * min(theta, 4)] so no edge exceeds theta * rho initially.
EnvelopeSuiteResult run_envelope_suite(const EnvelopeSuiteConfig& config);

/// One CSV row per run with its slacks and violation count.
void write_suite_csv(std::ostream& out, const EnvelopeSuiteResult& result);

}  // namespace ricci
