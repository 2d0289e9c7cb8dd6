#include "ricci/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "ricci/errors.hpp"

namespace ricci {

double Measure::mass(NodeId x) const {
  auto it = std::lower_bound(support.begin(), support.end(), x,
                             [](const auto& entry, NodeId key) { return entry.first < key; });
  return it != support.end() && it->first == x ? it->second : 0.0;
}

double Measure::total() const {
  double sum = 0.0;
  for (const auto& [node, m] : support) sum += m;
  return sum;
}

std::vector<NodeId> Measure::nodes() const {
  std::vector<NodeId> out;
  out.reserve(support.size());
  for (const auto& [node, m] : support) out.push_back(node);
  return out;
}

Measure make_measure(std::vector<std::pair<NodeId, double>> masses) {
  std::sort(masses.begin(), masses.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Measure out;
  for (const auto& [node, m] : masses) {
    if (m < 0.0 || !std::isfinite(m)) throw ContractViolation("measure mass must be non-negative");
    if (!out.support.empty() && out.support.back().first == node) {
      out.support.back().second += m;
    } else {
      out.support.emplace_back(node, m);
    }
  }
  std::erase_if(out.support, [](const auto& entry) { return entry.second == 0.0; });
  if (std::abs(out.total() - 1.0) > 1e-12) {
    throw ContractViolation("measure total mass " + std::to_string(out.total()) + " is not 1");
  }
  return out;
}

Measure lazy_measure(const WeightedGraph& g, NodeId x, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("alpha must lie in [0, 1]");
  const auto neighbours = g.incident(x);
  if (neighbours.empty()) {
    if (alpha == 1.0) return Measure{{{x, 1.0}}};
    throw UndefinedWalkError("lazy walk undefined at isolated node " + g.label(x));
  }
  const double wsum = g.weighted_degree(x);
  std::vector<std::pair<NodeId, double>> masses;
  masses.reserve(neighbours.size() + 1);
  if (alpha > 0.0) masses.emplace_back(x, alpha);
  if (alpha < 1.0) {
    for (const auto& inc : neighbours) {
      masses.emplace_back(inc.neighbor, (1.0 - alpha) * g.weight(inc.edge) / wsum);
    }
  }
  return make_measure(std::move(masses));
}

PairwiseDistances pairwise_distances(const WeightedGraph& g, std::vector<NodeId> rows,
                                     std::vector<NodeId> cols) {
  PairwiseDistances out{std::move(rows), std::move(cols), {}};
  const std::size_t p = out.rows.size();
  const std::size_t q = out.cols.size();
  out.d.resize(p * q);
  // Distances are symmetric, so search from the smaller side.
  if (p <= q) {
    for (std::size_t i = 0; i < p; ++i) {
      const auto row = distances_to(g, out.rows[i], out.cols);
      std::copy(row.begin(), row.end(), out.d.begin() + static_cast<long>(i * q));
    }
  } else {
    for (std::size_t j = 0; j < q; ++j) {
      const auto col = distances_to(g, out.cols[j], out.rows);
      for (std::size_t i = 0; i < p; ++i) out.d[i * q + j] = col[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transportation simplex

namespace {

struct Cell {
  std::size_t row;
  std::size_t col;
  double amount;
};

class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   std::vector<double> cost)
      : rows_(supply.size()),
        cols_(demand.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(std::move(cost)),
        slot_(rows_ * cols_, kNonBasic) {
    double scale = 1.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    tolerance_ = 1e-12 * scale;
  }

  std::size_t run() {
    north_west_corner();
    std::size_t pivots = 0;
    std::size_t degenerate_run = 0;
    const std::size_t pivot_limit = 1000 * (rows_ + cols_) * (rows_ + cols_) + 1000;
    while (true) {
      compute_potentials();
      const bool bland = degenerate_run >= kDegenerateSwitch;
      const auto entering = bland ? first_improving() : most_improving();
      if (!entering) break;
      const bool degenerate = pivot(entering->first, entering->second);
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
      if (++pivots > pivot_limit) {
        throw InvariantViolation("transport simplex exceeded its pivot limit");
      }
    }
    return pivots;
  }

  const std::vector<Cell>& basis() const { return basis_; }
  double cost_at(std::size_t i, std::size_t j) const { return cost_[i * cols_ + j]; }

 private:
  static constexpr std::size_t kNonBasic = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kDegenerateSwitch = 32;

  void add_basic(std::size_t i, std::size_t j, double amount) {
    slot_[i * cols_ + j] = basis_.size();
    basis_.push_back({i, j, amount});
  }

  // Produces exactly rows + cols - 1 basic cells forming a spanning tree of the
  // bipartite row/column graph, zero-amount cells included.
  void north_west_corner() {
    std::vector<double> left = supply_;
    std::vector<double> need = demand_;
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const bool row_first = left[i] <= need[j];
      const double amount = std::min(left[i], need[j]);
      add_basic(i, j, amount);
      left[i] -= amount;
      need[j] -= amount;
      if (i + 1 == rows_ && j + 1 == cols_) break;
      if (i + 1 == rows_) {
        ++j;
      } else if (j + 1 == cols_) {
        ++i;
      } else if (row_first) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void build_tree() {
    tree_.assign(rows_ + cols_, {});
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      tree_[basis_[k].row].push_back(k);
      tree_[rows_ + basis_[k].col].push_back(k);
    }
  }

  void compute_potentials() {
    build_tree();
    row_pot_.assign(rows_, 0.0);
    col_pot_.assign(cols_, 0.0);
    std::vector<char> seen(rows_ + cols_, 0);
    std::vector<std::size_t> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (std::size_t k : tree_[node]) {
        const Cell& c = basis_[k];
        const std::size_t other = node < rows_ ? rows_ + c.col : c.row;
        if (seen[other]) continue;
        seen[other] = 1;
        if (node < rows_) {
          col_pot_[c.col] = cost_at(c.row, c.col) - row_pot_[c.row];
        } else {
          row_pot_[c.row] = cost_at(c.row, c.col) - col_pot_[c.col];
        }
        queue.push_back(other);
      }
    }
    if (queue.size() != rows_ + cols_) {
      throw InvariantViolation("transport basis is not a spanning tree");
    }
  }

  double reduced(std::size_t i, std::size_t j) const {
    return cost_at(i, j) - row_pot_[i] - col_pot_[j];
  }

  std::optional<std::pair<std::size_t, std::size_t>> most_improving() const {
    double best = -tolerance_;
    std::optional<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (slot_[i * cols_ + j] != kNonBasic) continue;
        const double r = reduced(i, j);
        if (r < best) {
          best = r;
          out = {i, j};
        }
      }
    }
    return out;
  }

  std::optional<std::pair<std::size_t, std::size_t>> first_improving() const {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (slot_[i * cols_ + j] == kNonBasic && reduced(i, j) < -tolerance_) {
          return std::pair{i, j};
        }
      }
    }
    return std::nullopt;
  }

  // Returns true when the pivot moved zero mass.
  bool pivot(std::size_t ei, std::size_t ej) {
    // Tree path from column ej back to row ei; cells alternate -, +, -, ...
    const std::size_t start = rows_ + ej;
    const std::size_t goal = ei;
    std::vector<std::size_t> via(rows_ + cols_, kNonBasic);
    std::vector<char> seen(rows_ + cols_, 0);
    std::vector<std::size_t> queue{start};
    seen[start] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[goal]; ++head) {
      const std::size_t node = queue[head];
      for (std::size_t k : tree_[node]) {
        const Cell& c = basis_[k];
        const std::size_t other = node < rows_ ? rows_ + c.col : c.row;
        if (seen[other]) continue;
        seen[other] = 1;
        via[other] = k;
        queue.push_back(other);
      }
    }
    if (!seen[goal]) throw InvariantViolation("transport basis lost connectivity");

    std::vector<std::size_t> path;  // cells ordered from the column end
    for (std::size_t node = goal; node != start;) {
      const std::size_t k = via[node];
      path.push_back(k);
      const Cell& c = basis_[k];
      node = node < rows_ ? rows_ + c.col : c.row;
    }
    std::reverse(path.begin(), path.end());

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = kNonBasic;
    for (std::size_t idx = 0; idx < path.size(); idx += 2) {
      const Cell& c = basis_[path[idx]];
      const bool better = c.amount < theta;
      const bool tie_smaller =
          c.amount == theta && leaving != kNonBasic &&
          std::pair(c.row, c.col) < std::pair(basis_[leaving].row, basis_[leaving].col);
      if (better || tie_smaller) {
        theta = c.amount;
        leaving = path[idx];
      }
    }

    for (std::size_t idx = 0; idx < path.size(); ++idx) {
      Cell& c = basis_[path[idx]];
      c.amount += idx % 2 == 0 ? -theta : theta;
      if (c.amount < 0.0) c.amount = 0.0;
    }

    Cell& out = basis_[leaving];
    slot_[out.row * cols_ + out.col] = kNonBasic;
    out = Cell{ei, ej, theta};
    slot_[ei * cols_ + ej] = leaving;
    return theta == 0.0;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  std::vector<double> cost_;
  std::vector<std::size_t> slot_;
  std::vector<Cell> basis_;
  std::vector<std::vector<std::size_t>> tree_;
  std::vector<double> row_pot_;
  std::vector<double> col_pot_;
  double tolerance_ = 0.0;
};

}  // namespace

TransportSolution solve_transport(std::span<const double> supply,
                                  std::span<const double> demand,
                                  std::span<const double> cost) {
  const std::size_t p = supply.size();
  const std::size_t q = demand.size();
  if (cost.size() != p * q) throw ContractViolation("cost matrix shape mismatch");
  double total_supply = 0.0;
  double total_demand = 0.0;
  for (double a : supply) {
    if (!(a >= 0.0)) throw ContractViolation("negative supply");
    total_supply += a;
  }
  for (double b : demand) {
    if (!(b >= 0.0)) throw ContractViolation("negative demand");
    total_demand += b;
  }
  if (std::abs(total_supply - total_demand) > 1e-9) {
    throw ContractViolation("supply and demand totals differ");
  }

  std::vector<std::size_t> row_map;
  std::vector<std::size_t> col_map;
  for (std::size_t i = 0; i < p; ++i) {
    if (supply[i] > 0.0) row_map.push_back(i);
  }
  for (std::size_t j = 0; j < q; ++j) {
    if (demand[j] > 0.0) col_map.push_back(j);
  }
  TransportSolution out;
  if (row_map.empty() || col_map.empty()) return out;

  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  for (auto i : row_map) a.push_back(supply[i]);
  for (auto j : col_map) b.push_back(demand[j]);
  c.reserve(a.size() * b.size());
  for (auto i : row_map) {
    for (auto j : col_map) {
      const double cij = cost[i * q + j];
      if (!std::isfinite(cij)) throw DisconnectedSupportError("infinite transport cost");
      c.push_back(cij);
    }
  }

  TransportSimplex simplex(std::move(a), std::move(b), std::move(c));
  out.pivots = simplex.run();
  for (const auto& cell : simplex.basis()) {
    if (cell.amount > 0.0) {
      out.cells.emplace_back(row_map[cell.row], col_map[cell.col], cell.amount);
    }
  }
  std::sort(out.cells.begin(), out.cells.end());
  for (const auto& [i, j, amount] : out.cells) out.cost += amount * cost[i * q + j];
  return out;
}

TransportPlan wasserstein(const PairwiseDistances& dist, const Measure& mu1, const Measure& mu2) {
  auto locate = [](const std::vector<NodeId>& axis, NodeId x) {
    auto it = std::find(axis.begin(), axis.end(), x);
    if (it == axis.end()) {
      throw ContractViolation("support node " + std::to_string(x.value) +
                              " missing from distance table");
    }
    return static_cast<std::size_t>(it - axis.begin());
  };
  if (std::abs(mu1.total() - 1.0) > 1e-9 || std::abs(mu2.total() - 1.0) > 1e-9) {
    throw ContractViolation("wasserstein: marginals must both sum to 1");
  }

  const std::size_t p = mu1.support.size();
  const std::size_t q = mu2.support.size();
  std::vector<double> supply(p);
  std::vector<double> demand(q);
  std::vector<std::size_t> ri(p);
  std::vector<std::size_t> cj(q);
  for (std::size_t i = 0; i < p; ++i) {
    supply[i] = mu1.support[i].second;
    ri[i] = locate(dist.rows, mu1.support[i].first);
  }
  for (std::size_t j = 0; j < q; ++j) {
    demand[j] = mu2.support[j].second;
    cj[j] = locate(dist.cols, mu2.support[j].first);
  }
  std::vector<double> cost(p * q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const double d = dist.at(ri[i], cj[j]);
      if (d == kUnreachable) {
        throw DisconnectedSupportError("no path between support nodes " +
                                       std::to_string(mu1.support[i].first.value) + " and " +
                                       std::to_string(mu2.support[j].first.value));
      }
      cost[i * q + j] = d;
    }
  }

  const auto solution = solve_transport(supply, demand, cost);
  TransportPlan plan;
  plan.cost = solution.cost;
  plan.flows.reserve(solution.cells.size());
  for (const auto& [i, j, amount] : solution.cells) {
    plan.flows.push_back({mu1.support[i].first, mu2.support[j].first, amount});
  }
  return plan;
}

}  // namespace ricci
