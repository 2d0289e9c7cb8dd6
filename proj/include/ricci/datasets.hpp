#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ricci/graph.hpp"

namespace ricci {

/// A published network with its reported summary and run parameters.
struct DatasetSpec {
  std::string_view name;
  std::string_view file;
  std::size_t n = 0;
  std::size_t m = 0;
  double average_degree = 0.0;
  double density = 0.0;
  long diameter = 0;
  long iterations = 0;
  double alpha = 0.0;
  std::size_t core_size = 0;
  double r_d = 0.0;
  double r_s = 0.0;
};

std::span<const DatasetSpec> known_datasets();
const DatasetSpec* find_dataset(std::string_view name);

/// RICCI_DATA_DIR when set, otherwise `fallback`.
std::string data_directory(const std::string& fallback);

/// Loads <dir>/<file> as an unweighted graph (self-loops dropped, weight
/// columns ignored) and returns its largest component.
WeightedGraph load_dataset(const DatasetSpec& spec, const std::string& dir);

}  // namespace ricci
