#include "gsiht/pcst.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace gsiht {

namespace {

constexpr double kTimeTol = 1e-12;  // absolute tolerance for event times

struct Event {
  double time;
  int kind;   // 0 = edge tight, 1 = cluster deactivation
  int index;  // edge index or cluster root
  int stamp;  // must match the current version to be processed
  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    if (kind != o.kind) return kind > o.kind;  // edges before deactivations
    return index > o.index;
  }
};

// Moat-growing state. Clusters are identified by union-find roots (node ids);
// moat[v] is the total time v has spent inside an active cluster, so an edge
// (u,v) goes tight once moat[u] + moat[v] reaches its scaled cost. Every
// activity flip re-schedules the edges it touches; stale queue entries are
// dropped through version stamps.
struct Grower {
  const Graph& g;
  const PcstInstance& inst;

  std::vector<int> parent, csize;
  std::vector<std::vector<int>> members;
  std::vector<char> active;
  std::vector<double> pot;   // remaining potential, exact at current time
  std::vector<double> moat;  // exact at current time
  std::vector<int> edge_stamp, cluster_stamp;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
  std::vector<int> merge_edges;
  double now = 0.0;
  int active_count = 0;

  Grower(const Graph& graph, const PcstInstance& instance)
      : g(graph), inst(instance) {
    int n = g.num_nodes();
    parent.resize(n);
    csize.assign(n, 1);
    members.resize(n);
    active.assign(n, 0);
    pot.assign(n, 0.0);
    moat.assign(n, 0.0);
    edge_stamp.assign(g.edges().size(), 0);
    cluster_stamp.assign(n, 0);
    for (int v = 0; v < n; ++v) {
      parent[v] = v;
      members[v] = {v};
      pot[v] = inst.prizes[v];
      if (pot[v] > 0.0) {
        active[v] = 1;
        ++active_count;
        push_deactivation(v);
      }
    }
    for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) push_edge(e);
  }

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  double scaled_cost(int e) const {
    return inst.cost_scale * g.edges()[e].weight;
  }

  // (Re-)schedule the tightening event of edge e from the current state. Any
  // previously queued event for e is invalidated even when nothing new is
  // queued, so rate changes can never leave a stale event behind.
  void push_edge(int e) {
    ++edge_stamp[e];
    int u = g.edges()[e].u, v = g.edges()[e].v;
    int ru = find(u), rv = find(v);
    if (ru == rv) return;
    int rate = (active[ru] ? 1 : 0) + (active[rv] ? 1 : 0);
    if (rate == 0) return;
    double slack = scaled_cost(e) - moat[u] - moat[v];
    if (slack < 0.0) {
      assert(slack > -1e3 * kTimeTol);
      slack = 0.0;
    }
    queue.push({now + slack / rate, 0, e, edge_stamp[e]});
  }

  void push_deactivation(int r) {
    queue.push({now + std::max(0.0, pot[r]), 1, r, cluster_stamp[r]});
  }

  void repush_incident(const std::vector<int>& verts) {
    for (int v : verts)
      for (auto [nb, e] : g.neighbors(v)) {
        (void)nb;
        push_edge(e);
      }
  }

  void advance(double t) {
    double dt = t - now;
    assert(dt > -kTimeTol);
    if (dt <= 0.0) {
      now = t;
      return;
    }
    for (int v = 0; v < g.num_nodes(); ++v)
      if (active[find(v)]) moat[v] += dt;
    for (int r = 0; r < g.num_nodes(); ++r)
      if (parent[r] == r && active[r]) pot[r] -= dt;
    now = t;
  }

  void merge(int e) {
    int ru = find(g.edges()[e].u), rv = find(g.edges()[e].v);
    assert(ru != rv);
    // Union by size; equal sizes keep the lower id so runs are reproducible.
    if (csize[ru] < csize[rv] || (csize[ru] == csize[rv] && rv < ru))
      std::swap(ru, rv);
    bool keep_was = active[ru], other_was = active[rv];
    parent[rv] = ru;
    csize[ru] += csize[rv];
    double merged_pot = std::max(0.0, pot[ru]) + std::max(0.0, pot[rv]);
    pot[ru] = merged_pot;
    pot[rv] = 0.0;
    ++cluster_stamp[ru];
    ++cluster_stamp[rv];
    merge_edges.push_back(e);
    bool now_active = (keep_was || other_was) && merged_pot > 0.0;
    active_count += (now_active ? 1 : 0) - (keep_was ? 1 : 0) - (other_was ? 1 : 0);
    active[ru] = now_active;
    active[rv] = 0;
    if (now_active) push_deactivation(ru);
    // Member lists are folded only after re-scheduling, so each side's edges
    // can still be enumerated separately.
    if (keep_was != now_active) repush_incident(members[ru]);
    if (other_was != now_active) repush_incident(members[rv]);
    auto& big = members[ru];
    auto& small = members[rv];
    big.insert(big.end(), small.begin(), small.end());
    small.clear();
    small.shrink_to_fit();
  }

  void deactivate(int r) {
    assert(active[r] && parent[r] == r);
    assert(pot[r] < kTimeTol);
    active[r] = 0;
    pot[r] = 0.0;
    --active_count;
    ++cluster_stamp[r];
    repush_incident(members[r]);
  }

  void run() {
    while (active_count > inst.target_components && !queue.empty()) {
      Event ev = queue.top();
      queue.pop();
      if (ev.kind == 0) {
        if (ev.stamp != edge_stamp[ev.index]) continue;
        int ru = find(g.edges()[ev.index].u), rv = find(g.edges()[ev.index].v);
        if (ru == rv) continue;
        advance(ev.time);
        merge(ev.index);
      } else {
        if (ev.stamp != cluster_stamp[ev.index]) continue;
        if (!active[ev.index] || parent[ev.index] != ev.index) continue;
        advance(ev.time);
        deactivate(ev.index);
      }
    }
  }
};

// One grown cluster, pruned down to its best subtree.
struct PrunedTree {
  std::vector<int> nodes;
  std::vector<int> edges;
  double objective = 0.0;
  int min_node = 0;
};

// Strong pruning of the tree spanned by `tree_edges` over `verts`: pick the
// root maximizing the pruned value (rerooting pass), then drop every subtree
// whose net contribution is not positive.
PrunedTree strong_prune(const Graph& g, const PcstInstance& inst,
                        const std::vector<int>& verts,
                        const std::vector<int>& tree_edges) {
  PrunedTree out;
  if (verts.size() == 1) {
    out.nodes = verts;
    out.objective = inst.prizes[verts[0]];
    out.min_node = verts[0];
    return out;
  }
  assert(tree_edges.size() + 1 == verts.size());

  int n = static_cast<int>(verts.size());
  std::vector<int> sorted_verts = verts;
  std::sort(sorted_verts.begin(), sorted_verts.end());
  std::vector<int> local(g.num_nodes(), -1);
  for (int i = 0; i < n; ++i) local[sorted_verts[i]] = i;
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, pos)
  for (int pos = 0; pos < static_cast<int>(tree_edges.size()); ++pos) {
    const Edge& ed = g.edges()[tree_edges[pos]];
    adj[local[ed.u]].emplace_back(local[ed.v], pos);
    adj[local[ed.v]].emplace_back(local[ed.u], pos);
  }
  auto cost = [&](int pos) {
    return inst.cost_scale * g.edges()[tree_edges[pos]].weight;
  };
  auto prize = [&](int i) { return inst.prizes[sorted_verts[i]]; };

  std::vector<int> order, par, par_edge;
  auto dfs_order = [&](int root) {
    order.assign(1, root);
    par.assign(n, -1);
    par_edge.assign(n, -1);
    par[root] = root;
    for (size_t h = 0; h < order.size(); ++h) {
      int v = order[h];
      for (auto [u, pos] : adj[v])
        if (par[u] < 0) {
          par[u] = v;
          par_edge[u] = pos;
          order.push_back(u);
        }
    }
  };

  // down[v]: best pruned subtree rooted at v looking away from the root;
  // up[v]: best contribution reachable through v's parent side.
  std::vector<double> down(n), up(n);
  dfs_order(0);
  for (int h = n - 1; h >= 0; --h) {
    int v = order[h];
    down[v] = prize(v);
    for (auto [u, pos] : adj[v])
      if (par[u] == v && u != v)
        down[v] += std::max(0.0, down[u] - cost(pos));
  }
  up[order[0]] = 0.0;
  for (int h = 1; h < n; ++h) {
    int v = order[h];
    int pv = par[v];
    double without_v = down[pv] - std::max(0.0, down[v] - cost(par_edge[v]));
    up[v] = std::max(0.0, without_v + up[pv] - cost(par_edge[v]));
  }
  int best = 0;
  for (int v = 1; v < n; ++v) {
    double tv = down[v] + up[v], tb = down[best] + up[best];
    if (tv > tb || (tv == tb && sorted_verts[v] < sorted_verts[best])) best = v;
  }

  // Re-root at the winner and keep only strictly positive branches.
  dfs_order(best);
  for (int h = n - 1; h >= 0; --h) {
    int v = order[h];
    down[v] = prize(v);
    for (auto [u, pos] : adj[v])
      if (par[u] == v && u != v)
        down[v] += std::max(0.0, down[u] - cost(pos));
  }
  std::vector<char> keep(n, 0);
  keep[best] = 1;
  for (int h = 1; h < n; ++h) {
    int v = order[h];
    if (keep[par[v]] && down[v] - cost(par_edge[v]) > 0.0) {
      keep[v] = 1;
      out.edges.push_back(tree_edges[par_edge[v]]);
    }
  }
  out.min_node = g.num_nodes();
  for (int v = 0; v < n; ++v)
    if (keep[v]) {
      out.nodes.push_back(sorted_verts[v]);
      out.min_node = std::min(out.min_node, sorted_verts[v]);
    }
  out.objective = down[best];
  return out;
}

}  // namespace

double pcst_penalty(const Graph& g, const PcstInstance& inst,
                    const PcstForest& f) {
  std::vector<char> in(g.num_nodes(), 0);
  for (int v : f.nodes) in[v] = 1;
  double penalty = 0.0;
  for (int v = 0; v < g.num_nodes(); ++v)
    if (!in[v]) penalty += inst.prizes[v];
  for (int e : f.edges) penalty += inst.cost_scale * g.edges()[e].weight;
  return penalty;
}

PcstForest solve_pcst(const Graph& g, const PcstInstance& inst) {
  if (static_cast<int>(inst.prizes.size()) != g.num_nodes())
    throw std::invalid_argument("prize vector size must match node count");
  for (double p : inst.prizes)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("prizes must be finite and non-negative");
  if (!(inst.cost_scale > 0.0) || !std::isfinite(inst.cost_scale))
    throw std::invalid_argument("cost_scale must be finite and positive");
  if (inst.target_components < 1)
    throw std::invalid_argument("target_components must be at least 1");

  Grower grower(g, inst);
  grower.run();

  std::vector<std::vector<int>> cluster_edges(g.num_nodes());
  for (int e : grower.merge_edges)
    cluster_edges[grower.find(g.edges()[e].u)].push_back(e);

  std::vector<PrunedTree> trees;
  for (int r = 0; r < g.num_nodes(); ++r) {
    if (grower.parent[r] != r) continue;
    trees.push_back(strong_prune(g, inst, grower.members[r], cluster_edges[r]));
  }
  std::sort(trees.begin(), trees.end(),
            [](const PrunedTree& a, const PrunedTree& b) {
              if (a.objective != b.objective) return a.objective > b.objective;
              return a.min_node < b.min_node;
            });

  PcstForest out;
  int kept = 0;
  for (const PrunedTree& t : trees) {
    if (kept == inst.target_components) break;
    if (!(t.objective > 0.0)) break;
    out.nodes.insert(out.nodes.end(), t.nodes.begin(), t.nodes.end());
    out.edges.insert(out.edges.end(), t.edges.begin(), t.edges.end());
    out.objective += t.objective;
    ++kept;
  }
  std::sort(out.nodes.begin(), out.nodes.end());
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace gsiht
