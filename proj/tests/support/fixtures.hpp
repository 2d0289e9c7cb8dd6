#pragma once

#include <string>

#include "ricci/errors.hpp"
#include "ricci/graph.hpp"

namespace ricci::testing {

inline WeightedGraph load_example(const std::string& name) {
  return load_edge_list_file(std::string(RICCI_EXAMPLES_DIR) + "/" + name + ".txt");
}

inline NodeId node(const WeightedGraph& g, const std::string& label) {
  auto x = g.find_node(label);
  if (!x) throw ContractViolation("no node " + label);
  return *x;
}

inline EdgeId edge(const WeightedGraph& g, const std::string& a, const std::string& b) {
  auto e = g.find_edge(node(g, a), node(g, b));
  if (!e) throw ContractViolation("no edge " + a + "-" + b);
  return *e;
}

}  // namespace ricci::testing
