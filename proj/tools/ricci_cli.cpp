#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "json_config.hpp"
#include "ricci/baselines.hpp"
#include "ricci/core.hpp"
#include "ricci/curvature.hpp"
#include "ricci/datasets.hpp"
#include "ricci/errors.hpp"
#include "ricci/flow.hpp"
#include "ricci/metrics.hpp"
#include "ricci/report.hpp"
#include "ricci/suite.hpp"

namespace {

using ricci::NodeId;
using ricci::WeightedGraph;
using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kInputError = 1, kConfigError = 2, kSuiteFailure = 3 };

struct Globals {
  std::string config;
  int threads = 0;
  bool timings = false;
  bool drop_self_loops = false;
  bool ignore_weights = false;
};

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled) {}

  void lap(const std::string& phase) {
    if (!enabled_) return;
    const auto now = std::chrono::steady_clock::now();
    laps_.push_back({phase, std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

  const std::vector<ricci::Timing>& laps() const { return laps_; }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::vector<ricci::Timing> laps_;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Writes to `path`, or stdout when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ricci::Error("cannot write '" + path + "'");
  write(out);
}

WeightedGraph load_input(const std::string& path, const Globals& globals, bool lcc) {
  ricci::LoadOptions options;
  options.drop_self_loops = globals.drop_self_loops;
  options.ignore_weights = globals.ignore_weights;
  auto g = ricci::load_edge_list_file(path, options);
  if (g.node_count() == 0) throw ricci::Error("'" + path + "' contains no edges");
  return lcc ? ricci::largest_connected_component(g) : g;
}

std::vector<NodeId> read_node_list(const WeightedGraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ricci::Error("cannot open '" + path + "'");
  std::vector<NodeId> nodes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(line);
    std::string label;
    if (!(tokens >> label) || label[0] == '#') continue;
    auto x = g.find_node(label);
    if (!x) throw ricci::ParseError(lineno, "unknown node '" + label + "'");
    nodes.push_back(*x);
  }
  return nodes;
}

ricci::CurvatureKind curvature_kind(const std::string& name, double alpha) {
  if (name == "ollivier") return ricci::Ollivier{alpha};
  if (name == "lly") return ricci::LinLuYau{};
  throw ricci::ConfigError("curvature must be 'ollivier' or 'lly', got '" + name + "'");
}

ricci::FlowVariant flow_variant(const std::string& name) {
  if (auto v = ricci::parse_variant(name)) return *v;
  throw ricci::ConfigError("unknown flow variant '" + name + "'");
}

std::vector<ricci::Centrality> centralities(const std::string& name) {
  if (name == "all") return {std::begin(ricci::kAllCentralities), std::end(ricci::kAllCentralities)};
  if (auto c = ricci::parse_centrality(name)) return {*c};
  throw ricci::ConfigError("unknown centrality '" + name + "'");
}

json report_json(const ricci::RunReport& report) {
  std::ostringstream out;
  ricci::write_run_report(out, report);
  return json::parse(out.str());
}

// ---------------------------------------------------------------------------
// detect

struct DetectArgs {
  std::string input;
  long iterations = 50;
  double alpha = 0.1;
  double step = 0.1;
  double remove_frac = 0.8;
  std::optional<std::size_t> core_size;
  std::string output;
  std::string core_json;
  std::string core_nodes;
};

void add_detect_options(CLI::App* cmd, DetectArgs& a) {
  cmd->add_option("--input,-i", a.input, "Edge list file")->required();
  cmd->add_option("--iters,-N", a.iterations, "Flow iterations")->capture_default_str();
  cmd->add_option("--alpha", a.alpha, "Lazy-walk parameter")->capture_default_str();
  cmd->add_option("--step,-s", a.step, "Flow step size")->capture_default_str();
  cmd->add_option("--remove-frac,--tau", a.remove_frac, "Fraction of top-weight edges removed")
      ->capture_default_str();
  cmd->add_option("--core-size,-M", a.core_size, "Core budget (default floor(n/2))");
  cmd->add_option("--output,-o", a.output, "Report path (stdout by default)");
  cmd->add_option("--core-json", a.core_json, "Write the core result as JSON");
  cmd->add_option("--core-nodes", a.core_nodes, "Write core node labels, one per line");
}

ricci::CoreConfig core_config(const DetectArgs& a) {
  ricci::CoreConfig cfg;
  cfg.iterations = a.iterations;
  cfg.alpha = a.alpha;
  cfg.step = a.step;
  cfg.tau = a.remove_frac;
  cfg.core_budget = a.core_size;
  return cfg;
}

json core_config_json(const ricci::CoreConfig& cfg) {
  json out = {{"iterations", cfg.iterations}, {"alpha", cfg.alpha},
              {"step", cfg.step},             {"remove_frac", cfg.tau},
              {"core_size", nullptr}};
  if (cfg.core_budget) out["core_size"] = *cfg.core_budget;
  return out;
}

int cmd_detect(const DetectArgs& a, const Globals& globals) {
  Stopwatch clock(globals.timings);
  const auto g = load_input(a.input, globals, true);
  clock.lap("load");
  const auto cfg = core_config(a);
  const auto result = ricci::detect_core(g, cfg);
  clock.lap("detect");

  ricci::RunReport report;
  report.command = "detect";
  report.input = a.input;
  report.config_json = core_config_json(cfg).dump();
  report.stats = ricci::dataset_stats(g);
  clock.lap("stats");
  if (!result.core_nodes.empty()) {
    report.rows.push_back({"ricci-flow", ricci::evaluate_core(g, result.core_nodes)});
  }
  clock.lap("metrics");
  report.timings = clock.laps();
  report.generated_at = utc_now();

  emit(a.output, [&](std::ostream& out) { ricci::write_run_report(out, report); });
  if (!a.core_json.empty()) {
    emit(a.core_json, [&](std::ostream& out) { ricci::write_core_json(out, g, result); });
  }
  if (!a.core_nodes.empty()) {
    emit(a.core_nodes, [&](std::ostream& out) { ricci::write_core_nodes(out, g, result); });
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// baseline

struct BaselineArgs {
  std::string input;
  std::optional<std::size_t> k;
  std::string from_report;
  std::string method = "all";
  std::string output;
  std::string scores_dir;
};

std::size_t core_size_from_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ricci::Error("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    throw ricci::Error("'" + path + "' is not a report: " + ex.what());
  }
  for (const auto& row : doc.value("rows", json::array())) {
    if (row.value("method", "") == "ricci-flow") return row.at("core_nodes").get<std::size_t>();
  }
  throw ricci::Error("'" + path + "' has no ricci-flow row");
}

int cmd_baseline(const BaselineArgs& a, const Globals& globals) {
  Stopwatch clock(globals.timings);
  const auto g = load_input(a.input, globals, true);
  clock.lap("load");
  std::size_t k = 0;
  if (a.k) {
    k = *a.k;
  } else if (!a.from_report.empty()) {
    k = core_size_from_report(a.from_report);
  } else {
    throw ricci::ConfigError("baseline needs --k or --from-report");
  }
  if (k == 0 || k > g.node_count()) {
    throw ricci::ConfigError("group size " + std::to_string(k) + " outside [1, " +
                             std::to_string(g.node_count()) + "]");
  }

  ricci::RunReport report;
  report.command = "baseline";
  report.input = a.input;
  report.config_json = json{{"k", k}, {"method", a.method}}.dump();
  report.stats = ricci::dataset_stats(g);
  for (auto method : centralities(a.method)) {
    const auto scores = ricci::centrality(g, method);
    const auto group = ricci::connected_top_k(g, scores, k);
    report.rows.push_back({std::string(ricci::to_string(method)), ricci::evaluate_core(g, group)});
    if (!a.scores_dir.empty()) {
      std::filesystem::create_directories(a.scores_dir);
      const auto path = a.scores_dir + "/" + std::string(ricci::to_string(method)) + ".csv";
      emit(path, [&](std::ostream& out) { ricci::write_scores_csv(out, g, scores); });
    }
    clock.lap(std::string(ricci::to_string(method)));
  }
  report.timings = clock.laps();
  report.generated_at = utc_now();
  emit(a.output, [&](std::ostream& out) { ricci::write_run_report(out, report); });
  return kOk;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
  std::string input;
  std::string core;
  std::string output;
};

int cmd_metrics(const MetricsArgs& a, const Globals& globals) {
  const auto g = load_input(a.input, globals, false);
  const auto core = read_node_list(g, a.core);
  const auto report = ricci::evaluate_core(g, core);
  emit(a.output, [&](std::ostream& out) { ricci::write_metrics_json(out, report); });
  return kOk;
}

// ---------------------------------------------------------------------------
// flow-trace and curvature

struct FlowArgs {
  std::string input;
  std::string variant = "rho-driven";
  std::string curvature = "ollivier";
  double alpha = 0.1;
  double step = 0.1;
  long iterations = 1;
  std::optional<double> theta;
  bool check_envelope = false;
  bool no_guard = false;
  std::string output;
};

int cmd_flow_trace(const FlowArgs& a, const Globals& globals) {
  const auto g = load_input(a.input, globals, false);
  ricci::FlowConfig cfg;
  cfg.variant = flow_variant(a.variant);
  cfg.curvature = curvature_kind(a.curvature, a.alpha);
  cfg.step = a.step;
  cfg.iterations = a.iterations;
  cfg.theta = a.theta;
  cfg.envelope_check = a.check_envelope;
  cfg.positivity_guard = !a.no_guard;
  const auto traj = ricci::run_flow(g, cfg);
  emit(a.output, [&](std::ostream& out) { ricci::write_trace_csv(out, traj); });
  if (a.check_envelope && !traj.envelope_ok()) {
    for (const auto& v : traj.violations()) {
      std::cerr << "envelope violation: iteration " << v.iteration << " edge " << v.edge.value
                << " weight " << v.weight << " outside [" << v.lower << ", " << v.upper << "]\n";
    }
    return kSuiteFailure;
  }
  return kOk;
}

struct CurvatureArgs {
  std::string input;
  std::string curvature = "ollivier";
  double alpha = 0.1;
  std::string output;
};

int cmd_curvature(const CurvatureArgs& a, const Globals& globals) {
  const auto g = load_input(a.input, globals, false);
  const auto field = ricci::curvature_field(g, curvature_kind(a.curvature, a.alpha));
  emit(a.output, [&](std::ostream& out) {
    out << "edge_id,u_label,v_label,weight,kappa,rho\n";
    out << std::setprecision(17);
    for (const auto& c : field.entries) {
      const auto& e = g.edge(c.edge);
      out << c.edge.value << ',' << g.label(e.u) << ',' << g.label(e.v) << ',' << e.weight << ','
          << c.kappa << ',' << c.rho << '\n';
    }
  });
  return kOk;
}

// ---------------------------------------------------------------------------
// verify-bounds

struct BoundsArgs {
  std::uint64_t seed = 2024;
  int graphs = 50;
  long iterations = 30;
  double theta = 4.0;
  double alpha = 0.5;
  std::string variant;
  std::string curvature;
  std::string csv;
  bool budget = false;
  double eps = 1e-7;
  double threshold = 1e7;
  double s = 0.01;
  std::size_t m = 100;
  double min_w0 = 1.0;
  std::optional<double> sum_w0;
};

int cmd_verify_bounds(const BoundsArgs& a, const Globals&) {
  if (a.budget) {
    const auto b = ricci::iteration_budget(a.eps, a.threshold, a.s, a.m, a.min_w0,
                                           a.sum_w0.value_or(static_cast<double>(a.m) * a.min_w0));
    std::cout << "(" << b.underflow << ", " << b.overflow << ")\n";
    return kOk;
  }
  ricci::EnvelopeSuiteConfig cfg;
  cfg.seed = a.seed;
  cfg.graphs = a.graphs;
  cfg.iterations = a.iterations;
  cfg.theta = a.theta;
  cfg.alpha = a.alpha;
  if (!a.variant.empty()) cfg.variant = flow_variant(a.variant);
  if (!a.curvature.empty()) cfg.curvature = a.curvature;
  const auto result = ricci::run_envelope_suite(cfg);
  if (!a.csv.empty()) emit(a.csv, [&](std::ostream& out) { ricci::write_suite_csv(out, result); });

  std::map<std::string, std::pair<std::size_t, std::size_t>> rows;  // label -> runs, violations
  for (const auto& run : result.runs) {
    auto& row = rows[run.label];
    ++row.first;
    row.second += run.violations.size();
    for (const auto& v : run.violations) {
      std::cerr << "violation: " << ricci::to_string(run.variant) << " " << run.curvature
                << " seed " << run.graph_seed << " iteration " << v.iteration << " edge "
                << v.edge.value << "\n";
    }
  }
  for (const auto& [label, counts] : rows) {
    std::cout << (counts.second == 0 ? "PASS " : "FAIL ") << label << " runs=" << counts.first
              << " violations=" << counts.second << "\n";
  }
  return result.ok() ? kOk : kSuiteFailure;
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceArgs {
  std::string data_dir;
  std::string dataset = "all";
  std::string output;
  bool skip_baselines = false;
};

json reproduce_one(const ricci::DatasetSpec& spec, const std::string& dir, const ReproduceArgs& a,
                   const Globals& globals) {
  Stopwatch clock(globals.timings);
  const auto g = ricci::load_dataset(spec, dir);
  clock.lap("load");

  ricci::CoreConfig cfg;
  cfg.iterations = spec.iterations;
  cfg.alpha = spec.alpha;
  cfg.step = 0.1;
  cfg.tau = 0.8;
  const auto core = ricci::detect_core(g, cfg);
  clock.lap("detect");

  ricci::RunReport report;
  report.command = "reproduce";
  report.input = dir + "/" + std::string(spec.file);
  report.config_json = core_config_json(cfg).dump();
  report.stats = ricci::dataset_stats(g);
  report.rows.push_back({"ricci-flow", ricci::evaluate_core(g, core.core_nodes)});
  clock.lap("metrics");
  if (!a.skip_baselines) {
    for (auto method : ricci::kAllCentralities) {
      const auto group = ricci::connected_top_k(g, ricci::centrality(g, method), core.core_nodes.size());
      report.rows.push_back({std::string(ricci::to_string(method)), ricci::evaluate_core(g, group)});
      clock.lap(std::string(ricci::to_string(method)));
    }
  }
  report.timings = clock.laps();
  report.generated_at = utc_now();

  json out = report_json(report);
  json expected = {{"n", spec.n},
                   {"m", spec.m},
                   {"average_degree", spec.average_degree},
                   {"density", spec.density},
                   {"diameter", spec.diameter},
                   {"core_nodes", spec.core_size},
                   {"r_d", spec.r_d},
                   {"r_s", spec.r_s}};
  json mismatches = json::array();
  const auto& st = report.stats;
  if (st.n != spec.n) mismatches.push_back("n");
  if (st.m != spec.m) mismatches.push_back("m");
  if (std::abs(st.average_degree - spec.average_degree) > 0.005) mismatches.push_back("average_degree");
  if (std::abs(st.density - spec.density) > 0.0005) mismatches.push_back("density");
  if (st.diameter != spec.diameter) mismatches.push_back("diameter");
  out["dataset_name"] = spec.name;
  out["published"] = expected;
  out["mismatches"] = mismatches;
  return out;
}

int cmd_reproduce(const ReproduceArgs& a, const Globals& globals) {
  const std::string dir = a.data_dir.empty() ? ricci::data_directory("data") : a.data_dir;
  std::vector<const ricci::DatasetSpec*> selected;
  if (a.dataset == "all") {
    for (const auto& spec : ricci::known_datasets()) selected.push_back(&spec);
  } else if (const auto* spec = ricci::find_dataset(a.dataset)) {
    selected.push_back(spec);
  } else {
    throw ricci::ConfigError("unknown dataset '" + a.dataset + "'");
  }
  json doc = {{"datasets", json::array()}};
  for (const auto* spec : selected) doc["datasets"].push_back(reproduce_one(*spec, dir, a, globals));
  emit(a.output, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Ricci curvature flows and core-subgraph detection"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<ricci::cli::JsonConfig>());

  Globals globals;
  app.set_config("--config", "", "JSON configuration; command-line flags take precedence");
  app.add_option("--threads", globals.threads, "Maximum worker threads (0 = runtime default)");
  app.add_flag("--timings", globals.timings, "Include phase timings in reports");
  app.add_flag("--drop-self-loops", globals.drop_self_loops, "Skip self-loop rows in edge lists");
  app.add_flag("--ignore-weights", globals.ignore_weights, "Treat every edge as weight 1");

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Detect a core subgraph");
  add_detect_options(detect_cmd, detect);

  BaselineArgs baseline;
  auto* baseline_cmd = app.add_subcommand("baseline", "Size-matched centrality baselines");
  baseline_cmd->add_option("--input,-i", baseline.input)->required();
  baseline_cmd->add_option("--k", baseline.k, "Group size");
  baseline_cmd->add_option("--from-report", baseline.from_report, "Take k from a detect report");
  baseline_cmd->add_option("--method", baseline.method,
                           "degree, betweenness, closeness, pagerank or all")
      ->capture_default_str();
  baseline_cmd->add_option("--output,-o", baseline.output);
  baseline_cmd->add_option("--scores-dir", baseline.scores_dir, "Write <method>.csv score files");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Evaluate a given core node list");
  metrics_cmd->add_option("--input,-i", metrics.input)->required();
  metrics_cmd->add_option("--core", metrics.core, "Core labels, one per line")
      ->required();
  metrics_cmd->add_option("--output,-o", metrics.output);

  FlowArgs flow;
  auto* flow_cmd = app.add_subcommand("flow-trace", "Per-iteration flow trace as CSV");
  flow_cmd->add_option("--input,-i", flow.input)->required();
  flow_cmd->add_option("--variant", flow.variant,
                       "rho-driven, quasi-normalized, weight-driven, normalized or ni-reset")
      ->capture_default_str();
  flow_cmd->add_option("--curvature", flow.curvature, "ollivier or lly")->capture_default_str();
  flow_cmd->add_option("--alpha", flow.alpha)->capture_default_str();
  flow_cmd->add_option("--step,-s", flow.step)->capture_default_str();
  flow_cmd->add_option("--iters,-N", flow.iterations)->capture_default_str();
  flow_cmd->add_option("--theta", flow.theta, "Surgery threshold");
  flow_cmd->add_flag("--check-envelope", flow.check_envelope, "Check weights against envelopes");
  flow_cmd->add_flag("--no-guard", flow.no_guard, "Disable the positivity guard");
  flow_cmd->add_option("--output,-o", flow.output);

  CurvatureArgs curv;
  auto* curv_cmd = app.add_subcommand("curvature", "Per-edge curvature as CSV");
  curv_cmd->add_option("--input,-i", curv.input)->required();
  curv_cmd->add_option("--curvature", curv.curvature, "ollivier or lly")->capture_default_str();
  curv_cmd->add_option("--alpha", curv.alpha)->capture_default_str();
  curv_cmd->add_option("--output,-o", curv.output);

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("verify-bounds", "Weight envelope property suite");
  bounds_cmd->add_option("--seed", bounds.seed)->capture_default_str();
  bounds_cmd->add_option("--graphs", bounds.graphs)->capture_default_str();
  bounds_cmd->add_option("--iters,-N", bounds.iterations)->capture_default_str();
  bounds_cmd->add_option("--theta", bounds.theta)->capture_default_str();
  bounds_cmd->add_option("--alpha", bounds.alpha)->capture_default_str();
  bounds_cmd->add_option("--variant", bounds.variant, "Restrict to one variant");
  bounds_cmd->add_option("--curvature", bounds.curvature, "Restrict to ollivier or lly");
  bounds_cmd->add_option("--csv", bounds.csv, "Per-run slack CSV");
  bounds_cmd->add_flag("--budget", bounds.budget, "Print the iteration budget instead");
  bounds_cmd->add_option("--eps", bounds.eps)->capture_default_str();
  bounds_cmd->add_option("--threshold", bounds.threshold)->capture_default_str();
  bounds_cmd->add_option("--s", bounds.s)->capture_default_str();
  bounds_cmd->add_option("--m", bounds.m)->capture_default_str();
  bounds_cmd->add_option("--min-w0", bounds.min_w0)->capture_default_str();
  bounds_cmd->add_option("--sum-w0", bounds.sum_w0, "Initial total weight (default m * min-w0)");

  ReproduceArgs repro;
  auto* repro_cmd = app.add_subcommand("reproduce", "Dataset statistics and method comparison");
  repro_cmd->add_option("--data-dir", repro.data_dir, "Dataset directory (default RICCI_DATA_DIR or ./data)");
  repro_cmd->add_option("--dataset", repro.dataset, "cora, citeseer, bio-ce-ht or all")
      ->capture_default_str();
  repro_cmd->add_flag("--skip-baselines", repro.skip_baselines);
  repro_cmd->add_option("--output,-o", repro.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kConfigError;
  }

  ricci::set_thread_limit(globals.threads);
  try {
    if (*detect_cmd) return cmd_detect(detect, globals);
    if (*baseline_cmd) return cmd_baseline(baseline, globals);
    if (*metrics_cmd) return cmd_metrics(metrics, globals);
    if (*flow_cmd) return cmd_flow_trace(flow, globals);
    if (*curv_cmd) return cmd_curvature(curv, globals);
    if (*bounds_cmd) return cmd_verify_bounds(bounds, globals);
    if (*repro_cmd) return cmd_reproduce(repro, globals);
  } catch (const ricci::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInputError;
  }
  return kOk;
}
