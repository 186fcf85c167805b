#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gsiht/rng.hpp"

namespace gsiht {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

// Sorted unique node ids.
using Support = std::vector<int>;

// Undirected weighted graph with a fixed node count and an indexed edge list.
// Node ids are 0..num_nodes-1; edge indices are positions in edges().
class Graph {
 public:
  Graph(int num_nodes, std::vector<Edge> edges);

  static Graph grid(int rows, int cols, double weight = 1.0);
  static Graph complete(int num_nodes, double weight = 1.0);

  // Text format: first line "p <num_nodes>", then one "u v weight" per edge.
  static Graph load(const std::string& path);
  void save(const std::string& path) const;

  int num_nodes() const { return num_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // (neighbor node, edge index) pairs incident to v.
  const std::vector<std::pair<int, int>>& neighbors(int v) const {
    return adj_[v];
  }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

 private:
  int num_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

// Model parameters of a weighted-graph sparsity model: supports with at most
// `sparsity` nodes, at most `components` connected components, and a spanning
// forest of weight at most `weight_budget`.
struct WgmParams {
  int sparsity = 0;
  int components = 1;
  double weight_budget = std::numeric_limits<double>::infinity();
};

// Throws std::invalid_argument unless `support` is sorted, unique and in range.
void validate_support(const Graph& g, const Support& support);

Support make_support(std::vector<int> nodes);  // sort + dedupe + no validation

int connected_component_count(const Graph& g, const Support& support);

// Total weight of a minimum spanning forest of the subgraph induced by
// `support` (Kruskal). Zero for empty or edgeless supports.
double msf_weight(const Graph& g, const Support& support);

bool is_in_wgm(const Graph& g, const Support& support, const WgmParams& params);

// Node id of the central cell of a rows x cols grid, matching grid() layout.
int grid_center(int rows, int cols);

// Connected support grown by a simple random walk: start node plus every newly
// visited node until `target_size` distinct nodes are collected. Each move is
// uniform over the current node's neighbors. Throws std::runtime_error if the
// walk has not collected enough nodes after `step_cap` moves (default
// 100 * target_size).
Support random_walk_support(const Graph& g, int start, int target_size,
                            Rng& rng, long step_cap = -1);

}  // namespace gsiht
