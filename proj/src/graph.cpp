#include "gsiht/graph.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gsiht {

Graph::Graph(int num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  if (num_nodes_ <= 0)
    throw std::invalid_argument("graph needs at least one node");
  adj_.resize(num_nodes_);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= num_nodes_ || ed.v < 0 || ed.v >= num_nodes_)
      throw std::invalid_argument("edge endpoint out of range");
    if (ed.u == ed.v) throw std::invalid_argument("self loops not allowed");
    if (!(ed.weight >= 0.0))
      throw std::invalid_argument("edge weights must be non-negative");
    adj_[ed.u].emplace_back(ed.v, e);
    adj_[ed.v].emplace_back(ed.u, e);
  }
}

Graph Graph::grid(int rows, int cols, double weight) {
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("grid dimensions must be positive");
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(rows) * cols * 2);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1, weight});
      if (r + 1 < rows) edges.push_back({v, v + cols, weight});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

Graph Graph::complete(int num_nodes, double weight) {
  std::vector<Edge> edges;
  for (int u = 0; u < num_nodes; ++u)
    for (int v = u + 1; v < num_nodes; ++v) edges.push_back({u, v, weight});
  return Graph(num_nodes, std::move(edges));
}

Graph Graph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::string line;
  int num_nodes = -1;
  std::vector<Edge> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;  // blank line
    if (first == "#") continue;
    if (first == "p") {
      if (!(ss >> num_nodes))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed header");
      continue;
    }
    Edge e;
    std::istringstream es(line);
    if (!(es >> e.u >> e.v >> e.weight))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'u v weight'");
    edges.push_back(e);
  }
  if (num_nodes < 0)
    throw std::runtime_error(path + ": missing 'p <num_nodes>' header");
  return Graph(num_nodes, std::move(edges));
}

void Graph::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << "p " << num_nodes_ << "\n";
  out.precision(17);
  for (const Edge& e : edges_) out << e.u << " " << e.v << " " << e.weight << "\n";
}

void validate_support(const Graph& g, const Support& support) {
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= g.num_nodes())
      throw std::invalid_argument("support node out of range");
    if (i > 0 && support[i] <= support[i - 1])
      throw std::invalid_argument("support must be sorted unique node ids");
  }
}

Support make_support(std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

namespace {

// Small union-find used by component counting and Kruskal.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

int connected_component_count(const Graph& g, const Support& support) {
  validate_support(g, support);
  if (support.empty()) return 0;
  std::vector<int> pos(g.num_nodes(), -1);
  for (size_t i = 0; i < support.size(); ++i) pos[support[i]] = static_cast<int>(i);
  Dsu dsu(static_cast<int>(support.size()));
  int comps = static_cast<int>(support.size());
  for (int v : support) {
    for (auto [u, e] : g.neighbors(v)) {
      (void)e;
      if (pos[u] >= 0 && dsu.unite(pos[v], pos[u])) --comps;
    }
  }
  return comps;
}

double msf_weight(const Graph& g, const Support& support) {
  validate_support(g, support);
  if (support.size() < 2) return 0.0;
  std::vector<int> pos(g.num_nodes(), -1);
  for (size_t i = 0; i < support.size(); ++i) pos[support[i]] = static_cast<int>(i);
  // Induced edges, sorted by (weight, edge index) for a deterministic forest.
  std::vector<int> induced;
  const auto& edges = g.edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    if (pos[edges[e].u] >= 0 && pos[edges[e].v] >= 0) induced.push_back(e);
  std::sort(induced.begin(), induced.end(), [&](int a, int b) {
    if (edges[a].weight != edges[b].weight)
      return edges[a].weight < edges[b].weight;
    return a < b;
  });
  Dsu dsu(static_cast<int>(support.size()));
  double total = 0.0;
  for (int e : induced)
    if (dsu.unite(pos[edges[e].u], pos[edges[e].v])) total += edges[e].weight;
  return total;
}

bool is_in_wgm(const Graph& g, const Support& support, const WgmParams& params) {
  validate_support(g, support);
  if (static_cast<int>(support.size()) > params.sparsity) return false;
  if (connected_component_count(g, support) > params.components) return false;
  return msf_weight(g, support) <= params.weight_budget;
}

int grid_center(int rows, int cols) {
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("grid dimensions must be positive");
  return (rows / 2) * cols + cols / 2;
}

Support random_walk_support(const Graph& g, int start, int target_size,
                            Rng& rng, long step_cap) {
  if (start < 0 || start >= g.num_nodes())
    throw std::invalid_argument("walk start out of range");
  if (target_size < 1 || target_size > g.num_nodes())
    throw std::invalid_argument("walk target size out of range");
  if (step_cap < 0) step_cap = 100L * target_size;
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<int> nodes;
  nodes.reserve(target_size);
  seen[start] = 1;
  nodes.push_back(start);
  int cur = start;
  for (long step = 0; static_cast<int>(nodes.size()) < target_size; ++step) {
    if (step >= step_cap)
      throw std::runtime_error(
          "random walk failed to collect the requested support size");
    const auto& nb = g.neighbors(cur);
    if (nb.empty())
      throw std::runtime_error("random walk stuck on isolated node");
    std::uniform_int_distribution<size_t> pick(0, nb.size() - 1);
    cur = nb[pick(rng)].first;
    if (!seen[cur]) {
      seen[cur] = 1;
      nodes.push_back(cur);
    }
  }
  return make_support(std::move(nodes));
}

}  // namespace gsiht
