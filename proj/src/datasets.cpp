#include "ricci/datasets.hpp"

#include <cstdlib>

namespace ricci {

namespace {

constexpr DatasetSpec kDatasets[] = {
    {"cora", "cora.cites", 2485, 5069, 4.08, 0.002, 19, 50, 0.8, 894, 0.80, 2.17},
    {"citeseer", "citeseer.cites", 2120, 3679, 3.47, 0.002, 28, 12, 0.1, 343, 0.75, 1.67},
    {"bio-ce-ht", "bio-CE-HT.edges", 2617, 2985, 2.28, 0.001, 20, 30, 0.8, 542, 0.74, 1.80},
};

}  // namespace

std::span<const DatasetSpec> known_datasets() { return kDatasets; }

const DatasetSpec* find_dataset(std::string_view name) {
  for (const auto& spec : kDatasets) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

std::string data_directory(const std::string& fallback) {
  if (const char* env = std::getenv("RICCI_DATA_DIR"); env && *env) return env;
  return fallback;
}

WeightedGraph load_dataset(const DatasetSpec& spec, const std::string& dir) {
  LoadOptions options;
  options.drop_self_loops = true;
  options.ignore_weights = true;
  return largest_connected_component(load_edge_list_file(dir + "/" + std::string(spec.file), options));
}

}  // namespace ricci
