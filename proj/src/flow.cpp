#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "format.hpp"
#include "parallel.hpp"
#include "ricci/errors.hpp"

namespace ricci {

namespace {

constexpr struct {
  FlowVariant variant;
  std::string_view name;
} kVariantNames[] = {
    {FlowVariant::RhoDriven, "rho-driven"},
    {FlowVariant::QuasiNormalized, "quasi-normalized"},
    {FlowVariant::WeightDriven, "weight-driven"},
    {FlowVariant::Normalized, "normalized"},
    {FlowVariant::NiReset, "ni-reset"},
};

bool is_lly(const CurvatureKind& kind) { return std::holds_alternative<LinLuYau>(kind); }

bool needs_theta(FlowVariant v) {
  return v == FlowVariant::WeightDriven || v == FlowVariant::Normalized ||
         v == FlowVariant::NiReset;
}

// Relative tolerance on envelope comparisons; covers rounding when a bound is
// attained with equality (e.g. kappa = 1 on a lazy K2 with alpha = 1/2).
constexpr double kEnvelopeRelTol = 1e-12;

}  // namespace

std::string_view to_string(FlowVariant v) {
  for (const auto& entry : kVariantNames) {
    if (entry.variant == v) return entry.name;
  }
  return "unknown";
}

std::optional<FlowVariant> parse_variant(std::string_view name) {
  for (const auto& entry : kVariantNames) {
    if (entry.name == name) return entry.variant;
  }
  return std::nullopt;
}

double step_size_bound(FlowVariant variant, const CurvatureKind& curvature, std::size_t m,
                       std::optional<double> theta) {
  if (m == 0) throw EmptyGraphError("step size bound needs at least one edge");
  const bool lly = is_lly(curvature);
  const double md = static_cast<double>(m);
  switch (variant) {
    case FlowVariant::RhoDriven:
    case FlowVariant::WeightDriven:
    case FlowVariant::NiReset:
      return lly ? 0.5 : 1.0;
    case FlowVariant::QuasiNormalized:
      return lly ? 1.0 / (2.0 * md + 2.0) : 1.0 / (md + 1.0);
    case FlowVariant::Normalized:
      if (!theta) throw ConfigError("normalized flow step bound requires theta");
      if (!(*theta > 1.0)) throw ConfigError("theta must exceed 1");
      return lly ? 1.0 / (md * *theta + 2.0) : 1.0 / (md * *theta);
  }
  throw ConfigError("unknown flow variant");
}

double BoundEnvelope::lower(long j, double w0) const {
  return std::pow(lower_factor, static_cast<double>(j)) * w0;
}

double BoundEnvelope::upper(long j, double w0) const {
  const double scale = upper_scale == UpperScale::PerEdgeInitial ? w0 : baseline_sum;
  return std::pow(upper_factor, static_cast<double>(j)) * scale;
}

BoundEnvelope envelope(const FlowConfig& config, std::size_t m0, std::span<const double> w0) {
  const double s = config.step;
  const double bound = step_size_bound(config.variant, config.curvature, m0, config.theta);
  if (!(s > 0.0 && s < bound)) {
    std::ostringstream what;
    what << "step size " << s << " outside (0, " << bound << ") for " << to_string(config.variant)
         << " / " << describe(config.curvature);
    throw ConfigError(what.str());
  }
  if (needs_theta(config.variant) && !config.theta) {
    throw ConfigError(std::string(to_string(config.variant)) + " envelope requires theta");
  }
  const double theta = config.theta.value_or(1.0);
  const double m = static_cast<double>(m0);
  const bool lly = is_lly(config.curvature);

  BoundEnvelope env;
  env.upper_scale = UpperScale::SumOfInitial;
  env.baseline_sum = 0.0;
  for (double w : w0) env.baseline_sum += w;

  switch (config.variant) {
    case FlowVariant::RhoDriven:
      env.label = lly ? "2.1(ii)" : "2.1(i)";
      env.lower_factor = lly ? 1.0 - 2.0 * s : 1.0 - s;
      env.upper_factor = lly ? 1.0 + 2.0 * m * s : 1.0 + m * s;
      break;
    case FlowVariant::QuasiNormalized:
      env.label = lly ? "2.2(ii)" : "2.2(i)";
      env.lower_factor = lly ? 1.0 - 2.0 * (m + 1.0) * s : 1.0 - (m + 1.0) * s;
      env.upper_factor = lly ? 1.0 + 2.0 * (m + 1.0) * s : 1.0 + m * s;
      break;
    case FlowVariant::WeightDriven:
      env.label = lly ? "2.3(ii)" : "2.3(i)";
      env.lower_factor = lly ? 1.0 - 2.0 * s : 1.0 - s;
      env.upper_factor = lly ? 1.0 + 2.0 * m * theta * s : 1.0 - s + m * theta * s;
      break;
    case FlowVariant::Normalized:
      env.label = lly ? "2.4(ii)" : "2.4(i)";
      env.lower_factor = lly ? 1.0 - (m * theta + 2.0) * s : 1.0 - m * theta * s;
      env.upper_factor = 1.0;
      break;
    case FlowVariant::NiReset:
      env.label = lly ? "2.5(ii)" : "2.5(i)";
      env.lower_factor = (lly ? 1.0 - 2.0 * s : 1.0 - s) / theta;
      env.upper_factor = lly ? 1.0 + 2.0 * m * s : 1.0 + m * s;
      env.upper_from_derivation = true;
      break;
  }
  return env;
}

IterationBudget iteration_budget(double eps0, double threshold, double s, std::size_t m,
                                 double min_w0, double sum_w0) {
  if (m == 0) throw DomainError("iteration budget needs m >= 1");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("iteration budget needs 0 < s < 1");
  if (!(eps0 > 0.0 && eps0 < min_w0)) throw DomainError("iteration budget needs 0 < eps0 < min w0");
  if (!(threshold >= sum_w0)) throw DomainError("iteration budget needs threshold >= sum w0");
  IterationBudget out;
  out.underflow = static_cast<long>(std::floor(std::log(eps0 / min_w0) / std::log1p(-s)));
  out.overflow = static_cast<long>(
      std::floor(std::log(threshold / sum_w0) / std::log1p(static_cast<double>(m) * s)));
  return out;
}

IterationBudget iteration_budget(double eps0, double threshold, double s,
                                 std::span<const double> w0) {
  if (w0.empty()) throw DomainError("iteration budget needs initial weights");
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (double w : w0) {
    sum += w;
    lo = std::min(lo, w);
  }
  return iteration_budget(eps0, threshold, s, w0.size(), lo, sum);
}

std::vector<double> flow_step(const WeightedGraph& g, const CurvatureField& field,
                              const FlowConfig& config, long iteration) {
  const double s = config.step;
  if (!(s > 0.0)) throw ConfigError("step size must be positive");
  if (field.entries.size() != g.live_edge_count()) {
    throw ContractViolation("curvature field does not match the graph snapshot");
  }
  double sum_w = 0.0;
  double sum_kr = 0.0;
  double sum_kw = 0.0;
  for (const auto& c : field.entries) {
    const double w = g.weight(c.edge);
    sum_w += w;
    sum_kr += c.kappa * c.rho;
    sum_kw += c.kappa * w;
  }

  std::vector<double> next(g.edge_slot_count(), 0.0);
  for (const auto& c : field.entries) {
    if (!g.is_live(c.edge)) throw ContractViolation("curvature field refers to a removed edge");
    const double w = g.weight(c.edge);
    double updated = 0.0;
    switch (config.variant) {
      case FlowVariant::RhoDriven:
        updated = w - s * c.kappa * c.rho;
        break;
      case FlowVariant::QuasiNormalized:
        updated = w + s * (-c.kappa + sum_kr / sum_w) * c.rho;
        break;
      case FlowVariant::WeightDriven:
        updated = w - s * c.kappa * w;
        break;
      case FlowVariant::Normalized:
        updated = w + s * (-c.kappa + sum_kw / sum_w) * w;
        break;
      case FlowVariant::NiReset:
        updated = c.rho - s * c.kappa * c.rho;
        break;
    }
    if (config.positivity_guard && !(updated > 0.0 && std::isfinite(updated))) {
      std::ostringstream what;
      what << "step too large: edge " << c.edge.value << " weight would become " << updated
           << " at iteration " << iteration;
      throw StepTooLargeError(what.str(), c.edge.value, iteration);
    }
    next[c.edge.value] = updated;
  }
  return next;
}

std::vector<EdgeId> theta_surgery(WeightedGraph& g, double theta, Execution exec) {
  if (!(theta > 1.0)) throw ConfigError("surgery theta must exceed 1");
  const auto rho = edge_distances(g, exec);
  std::vector<EdgeId> removed;
  for (EdgeId e : g.live_edges()) {
    if (g.weight(e) / rho[e.value] > theta) removed.push_back(e);
  }
  for (EdgeId e : removed) g.remove_edge(e);
  return removed;
}

bool FlowTrajectory::envelope_ok() const {
  return std::all_of(records.begin(), records.end(),
                     [](const IterationRecord& r) { return r.envelope.ok; });
}

std::vector<EnvelopeViolation> FlowTrajectory::violations() const {
  std::vector<EnvelopeViolation> out;
  for (const auto& r : records) {
    out.insert(out.end(), r.envelope.violations.begin(), r.envelope.violations.end());
  }
  return out;
}

namespace {

EnvelopeVerdict check_envelope(const BoundEnvelope& env, long j, const std::vector<EdgeState>& states,
                               const std::vector<double>& w0) {
  EnvelopeVerdict verdict;
  verdict.checked = true;
  verdict.min_lower_slack = std::numeric_limits<double>::infinity();
  verdict.min_upper_slack = std::numeric_limits<double>::infinity();
  for (const auto& st : states) {
    const double lo = env.lower(j, w0[st.edge.value]);
    const double hi = env.upper(j, w0[st.edge.value]);
    verdict.min_lower_slack = std::min(verdict.min_lower_slack, (st.weight - lo) / lo);
    verdict.min_upper_slack = std::min(verdict.min_upper_slack, (hi - st.weight) / hi);
    if (st.weight < lo * (1.0 - kEnvelopeRelTol) || st.weight > hi * (1.0 + kEnvelopeRelTol)) {
      verdict.ok = false;
      verdict.violations.push_back({j, st.edge, st.weight, lo, hi});
    }
  }
  return verdict;
}

}  // namespace

FlowTrajectory run_flow(WeightedGraph g, const FlowConfig& config) {
  if (config.iterations < 0) throw ConfigError("iteration count must be non-negative");
  if (!(config.step > 0.0)) throw ConfigError("step size must be positive");
  if (config.theta && !(*config.theta > 1.0)) throw ConfigError("surgery theta must exceed 1");

  FlowTrajectory traj;
  traj.config = config;
  traj.initial_edge_count = g.live_edge_count();
  traj.initial_weights.assign(g.edge_slot_count(), 0.0);
  std::vector<double> live_w0;
  for (EdgeId e : g.live_edges()) {
    traj.initial_weights[e.value] = g.weight(e);
    live_w0.push_back(g.weight(e));
  }
  if (config.envelope_check) traj.bound = envelope(config, traj.initial_edge_count, live_w0);

  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  {
    IterationRecord initial;
    initial.iteration = 0;
    initial.kappa_min = initial.kappa_max = kNaN;
    initial.total_weight = g.total_weight();
    std::vector<EdgeState> states;
    for (EdgeId e : g.live_edges()) states.push_back({e, g.weight(e), kNaN, kNaN});
    if (traj.bound) initial.envelope = check_envelope(*traj.bound, 0, states, traj.initial_weights);
    if (config.record_snapshots) initial.edges = std::move(states);
    traj.records.push_back(std::move(initial));
  }

  for (long j = 1; j <= config.iterations; ++j) {
    IterationRecord rec;
    rec.iteration = j;
    CurvatureField field;
    try {
      field = curvature_field(g, config.curvature, j - 1, config.execution);
    } catch (const Error& ex) {
      throw Error("iteration " + std::to_string(j) + ": " + ex.what());
    }
    const double before = g.total_weight();
    const auto next = flow_step(g, field, config, j);

    std::vector<EdgeState> states;
    states.reserve(field.entries.size());
    for (const auto& c : field.entries) {
      g.set_weight(c.edge, next[c.edge.value]);
      states.push_back({c.edge, next[c.edge.value], c.kappa, c.rho});
    }
    ++traj.steps_applied;
    const double after = g.total_weight();
    rec.conservation_error = before > 0.0 ? std::abs(after - before) / before : 0.0;
    rec.kappa_min = field.entries.empty() ? kNaN : field.min_kappa();
    rec.kappa_max = field.entries.empty() ? kNaN : field.max_kappa();
    if (traj.bound) rec.envelope = check_envelope(*traj.bound, j, states, traj.initial_weights);

    if (config.theta) {
      rec.removed = theta_surgery(g, *config.theta, config.execution);
      if (!rec.removed.empty() && traj.bound && config.variant == FlowVariant::Normalized) {
        traj.bound->baseline_sum = g.total_weight();
        traj.rebases.emplace_back(j, traj.bound->baseline_sum);
      }
    }
    rec.total_weight = g.total_weight();
    if (config.record_snapshots) rec.edges = std::move(states);
    traj.records.push_back(std::move(rec));
  }
  traj.final_graph = std::move(g);
  return traj;
}

void write_trace_csv(std::ostream& out, const FlowTrajectory& trajectory) {
  using detail::format_number;
  const WeightedGraph& g = trajectory.final_graph;
  out << "iteration,edge_id,u_label,v_label,weight,kappa,rho,removed_flag\n";
  for (const auto& rec : trajectory.records) {
    for (const auto& st : rec.edges) {
      const Edge& edge = g.edge(st.edge);
      const bool removed = std::find(rec.removed.begin(), rec.removed.end(), st.edge) !=
                           rec.removed.end();
      out << rec.iteration << ',' << st.edge.value << ',' << g.label(edge.u) << ','
          << g.label(edge.v) << ',' << format_number(st.weight) << ',' << format_number(st.kappa)
          << ',' << format_number(st.rho) << ',' << (removed ? 1 : 0) << '\n';
    }
  }
}

}  // namespace ricci
