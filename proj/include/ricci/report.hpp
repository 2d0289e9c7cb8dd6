#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"
#include "ricci/metrics.hpp"

namespace ricci {

struct DatasetStats {
  std::size_t n = 0;
  std::size_t m = 0;
  double average_degree = 0.0;
  double density = 0.0;
  /// Largest finite hop distance.
  long diameter = 0;
};

DatasetStats dataset_stats(const WeightedGraph& g, Execution exec = Execution::Parallel);

struct MethodRow {
  std::string method;
  MetricsReport metrics;
};

struct Timing {
  std::string phase;
  double seconds = 0.0;
};

struct RunReport {
  std::string command;
  std::string input;
  /// Resolved configuration, already serialised as a JSON object.
  std::string config_json = "{}";
  DatasetStats stats;
  std::vector<MethodRow> rows;
  /// Only written when non-empty.
  std::vector<Timing> timings;
  std::string generated_at;
};

void write_run_report(std::ostream& out, const RunReport& report);

}  // namespace ricci
