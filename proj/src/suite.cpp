#include "ricci/suite.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <set>

#include "format.hpp"
#include "ricci/errors.hpp"

namespace ricci {

WeightedGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, std::size_t extra,
                                     double wmin, double wmax) {
  if (n == 0) throw DomainError("random graph needs at least one node");
  std::uniform_real_distribution<double> weight(wmin, wmax);
  WeightedGraph g(n);
  std::set<std::pair<std::uint32_t, std::uint32_t>> used;
  auto add = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b) return false;
    if (!used.insert({std::min(a, b), std::max(a, b)}).second) return false;
    g.add_edge(NodeId{a}, NodeId{b}, weight(rng));
    return true;
  };
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::uint32_t> parent(0, v - 1);
    add(parent(rng), v);
  }
  const std::size_t room = n * (n - 1) / 2 - (n - 1);
  std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(n - 1));
  for (std::size_t added = 0; added < std::min(extra, room);) {
    if (add(any(rng), any(rng))) ++added;
  }
  return g;
}

bool EnvelopeSuiteResult::ok() const { return violation_count() == 0; }

std::size_t EnvelopeSuiteResult::violation_count() const {
  std::size_t total = 0;
  for (const auto& run : runs) total += run.violations.size();
  return total;
}

double EnvelopeSuiteResult::max_normalized_conservation_error() const {
  double worst = 0.0;
  for (const auto& run : runs) {
    if (run.variant == FlowVariant::Normalized) worst = std::max(worst, run.max_conservation_error);
  }
  return worst;
}

EnvelopeSuiteResult run_envelope_suite(const EnvelopeSuiteConfig& config) {
  if (config.graphs < 1 || config.iterations < 0) throw ConfigError("suite needs graphs >= 1");
  if (!(config.step_fraction > 0.0 && config.step_fraction < 1.0)) {
    throw ConfigError("step fraction must lie in (0, 1)");
  }
  if (!(config.theta > 1.0)) throw ConfigError("theta must exceed 1");
  if (config.min_nodes < 2 || config.max_nodes < config.min_nodes) {
    throw ConfigError("invalid node range");
  }
  if (config.curvature && *config.curvature != "ollivier" && *config.curvature != "lly") {
    throw ConfigError("curvature must be ollivier or lly");
  }

  const double wmin = 0.5;
  const double wmax = 0.5 * std::min(config.theta, 4.0);
  EnvelopeSuiteResult result;
  std::mt19937_64 seeds(config.seed);
  std::vector<std::uint64_t> graph_seeds(static_cast<std::size_t>(config.graphs));
  for (auto& s : graph_seeds) s = seeds();

  for (FlowVariant variant : kAllVariants) {
    if (config.variant && *config.variant != variant) continue;
    for (const std::string curvature : {"ollivier", "lly"}) {
      if (config.curvature && *config.curvature != curvature) continue;
      for (std::uint64_t graph_seed : graph_seeds) {
        std::mt19937_64 rng(graph_seed);
        std::uniform_int_distribution<std::size_t> size(config.min_nodes, config.max_nodes);
        const std::size_t n = size(rng);
        std::uniform_int_distribution<std::size_t> chords(0, n);
        auto g = random_connected_graph(rng, n, chords(rng), wmin, wmax);

        FlowConfig flow;
        flow.variant = variant;
        flow.curvature = curvature == "lly" ? CurvatureKind{LinLuYau{}}
                                            : CurvatureKind{Ollivier{config.alpha}};
        if (variant == FlowVariant::WeightDriven || variant == FlowVariant::Normalized ||
            variant == FlowVariant::NiReset) {
          flow.theta = config.theta;
        }
        flow.step = config.step_fraction *
                    step_size_bound(variant, flow.curvature, g.live_edge_count(), flow.theta);
        flow.iterations = config.iterations;
        flow.envelope_check = true;
        flow.record_snapshots = false;
        flow.execution = config.execution;

        EnvelopeRun run;
        run.variant = variant;
        run.curvature = curvature;
        run.graph_seed = graph_seed;
        run.n = g.node_count();
        run.m = g.live_edge_count();
        run.step = flow.step;
        const auto traj = run_flow(std::move(g), flow);
        run.label = traj.bound->label;
        run.min_lower_slack = std::numeric_limits<double>::infinity();
        run.min_upper_slack = std::numeric_limits<double>::infinity();
        for (const auto& rec : traj.records) {
          if (rec.iteration == 0) continue;
          run.min_lower_slack = std::min(run.min_lower_slack, rec.envelope.min_lower_slack);
          run.min_upper_slack = std::min(run.min_upper_slack, rec.envelope.min_upper_slack);
          run.max_conservation_error = std::max(run.max_conservation_error, rec.conservation_error);
          run.surgeries += rec.removed.size();
        }
        run.violations = traj.violations();
        result.runs.push_back(std::move(run));
      }
    }
  }
  return result;
}

void write_suite_csv(std::ostream& out, const EnvelopeSuiteResult& result) {
  using detail::format_number;
  out << "variant,curvature,row,graph_seed,n,m,step,min_lower_slack,min_upper_slack,"
         "max_conservation_error,surgeries,violations\n";
  for (const auto& run : result.runs) {
    out << to_string(run.variant) << ',' << run.curvature << ',' << run.label << ','
        << run.graph_seed << ',' << run.n << ',' << run.m << ',' << format_number(run.step) << ','
        << format_number(run.min_lower_slack) << ',' << format_number(run.min_upper_slack) << ','
        << format_number(run.max_conservation_error) << ',' << run.surgeries << ','
        << run.violations.size() << '\n';
  }
}

}  // namespace ricci
