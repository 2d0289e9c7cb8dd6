#include "ricci/report.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "parallel.hpp"

namespace ricci {

DatasetStats dataset_stats(const WeightedGraph& g, Execution exec) {
  DatasetStats stats;
  stats.n = g.node_count();
  stats.m = g.live_edge_count();
  if (stats.n > 0) {
    stats.average_degree = 2.0 * static_cast<double>(stats.m) / static_cast<double>(stats.n);
  }
  if (stats.n > 1) {
    stats.density = 2.0 * static_cast<double>(stats.m) /
                    (static_cast<double>(stats.n) * static_cast<double>(stats.n - 1));
  }
  std::vector<long> eccentricity(stats.n, 0);
  detail::for_each_index(stats.n, exec, [&](std::size_t i) {
    thread_local std::vector<std::int32_t> dist;
    bfs_hops(g, NodeId{static_cast<std::uint32_t>(i)}, dist);
    eccentricity[i] = *std::max_element(dist.begin(), dist.end());
  });
  if (!eccentricity.empty()) stats.diameter = *std::max_element(eccentricity.begin(), eccentricity.end());
  return stats;
}

void write_run_report(std::ostream& out, const RunReport& report) {
  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  doc["input"] = report.input;
  doc["config"] = nlohmann::ordered_json::parse(report.config_json);
  doc["dataset"] = {{"n", report.stats.n},
                    {"m", report.stats.m},
                    {"average_degree", report.stats.average_degree},
                    {"density", report.stats.density},
                    {"diameter", report.stats.diameter}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    const auto& m = row.metrics;
    nlohmann::ordered_json entry;
    entry["method"] = row.method;
    entry["r_d"] = m.r_d;
    entry["r_s"] = m.stretch.r_s ? nlohmann::ordered_json(*m.stretch.r_s) : nullptr;
    entry["r_s_valid"] = m.stretch.r_s.has_value();
    entry["xi"] = m.stretch.xi;
    entry["core_nodes"] = m.core_nodes;
    entry["core_edges"] = m.core_edges;
    rows.push_back(std::move(entry));
  }
  doc["rows"] = rows;
  if (!report.timings.empty()) {
    auto timings = nlohmann::ordered_json::object();
    for (const auto& t : report.timings) timings[t.phase] = t.seconds;
    doc["timings"] = timings;
  }
  doc["generated_at"] = report.generated_at;
  out << doc.dump(2) << '\n';
}

}  // namespace ricci
