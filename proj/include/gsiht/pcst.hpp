#pragma once

#include <vector>

#include "gsiht/graph.hpp"

namespace gsiht {

struct PcstInstance {
  std::vector<double> prizes;    // one non-negative prize per node
  double cost_scale = 1.0;       // multiplies every edge weight
  int target_components = 1;     // how many trees to keep (g)
};

struct PcstForest {
  Support nodes;              // union of the kept trees, sorted
  std::vector<int> edges;     // edge indices into Graph::edges(), sorted
  double objective = 0.0;     // collected prize minus scaled cost of kept edges
};

// Scaled cost of the forest's edges plus prizes of the nodes it leaves out.
// This is the quantity the approximation guarantee is stated against.
double pcst_penalty(const Graph& g, const PcstInstance& inst,
                    const PcstForest& f);

// Prize-collecting Steiner forest via Goemans-Williamson moat growing
// (cluster merge / deactivation events off a priority queue) followed by
// strong pruning. Growth stops once at most target_components clusters are
// still active; the surviving clusters are pruned and the best
// target_components trees with positive objective are kept (ties broken by
// lower minimum node id). Deterministic: simultaneous events are ordered
// edge-before-deactivation, then by index.
PcstForest solve_pcst(const Graph& g, const PcstInstance& inst);

}  // namespace gsiht
