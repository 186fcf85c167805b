#include "gsiht/projection.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gsiht {

ProjectionConfig ProjectionConfig::head(int num_nodes, const WgmParams& wgm,
                                        double omega) {
  ProjectionConfig c;
  c.kind = ProjectionKind::head;
  c.wgm = wgm;
  c.omega = omega;
  c.s_low = std::max(1, num_nodes / 2);
  c.s_high = static_cast<int>(std::llround(c.s_low * (1.0 + omega)));
  c.validate();
  return c;
}

ProjectionConfig ProjectionConfig::tail(const WgmParams& wgm, double omega) {
  ProjectionConfig c;
  c.kind = ProjectionKind::tail;
  c.wgm = wgm;
  c.omega = omega;
  c.s_low = wgm.sparsity;
  c.s_high = static_cast<int>(std::llround(c.s_low * (1.0 + omega)));
  c.validate();
  return c;
}

WgmParams ProjectionConfig::relaxed_wgm() const {
  WgmParams r;
  r.sparsity = s_high;
  r.components = wgm.components;
  r.weight_budget = std::isinf(wgm.weight_budget)
                        ? wgm.weight_budget
                        : wgm.weight_budget + (s_high - s_low);
  return r;
}

void ProjectionConfig::validate() const {
  if (s_low < 1) throw std::invalid_argument("projection s_low must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("projection omega must be > 0");
  if (s_high != static_cast<int>(std::llround(s_low * (1.0 + omega))))
    throw std::invalid_argument("projection s_high must equal round(s_low*(1+omega))");
  if (max_binary_iters < 1)
    throw std::invalid_argument("projection needs at least one binary iteration");
  if (!(cost_low > 0.0) || !(cost_high >= cost_low))
    throw std::invalid_argument("bad cost-multiplier search window");
  if (wgm.components < 1)
    throw std::invalid_argument("model needs at least one component");
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const Support& support) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (size_t i = 0; i < support.size(); ++i) {
    int v = support[i];
    if (v < 0 || v >= x.size())
      throw std::invalid_argument("support index out of range");
    if (i > 0 && support[i] <= support[i - 1])
      throw std::invalid_argument("support must be sorted unique");
    out[v] = x[v];
  }
  return out;
}

ProjectionResult top_s_projection(const Eigen::VectorXd& x, int s) {
  if (s < 0) throw std::invalid_argument("sparsity must be non-negative");
  std::vector<int> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    double fa = std::abs(x[a]), fb = std::abs(x[b]);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  ProjectionResult r;
  for (int k = 0; k < std::min<int>(s, x.size()); ++k) {
    if (x[idx[k]] == 0.0) break;  // zeros carry nothing
    r.support.push_back(idx[k]);
  }
  std::sort(r.support.begin(), r.support.end());
  r.vector = restrict_to(x, r.support);
  r.achieved_sparsity = static_cast<int>(r.support.size());
  r.captured_energy = r.vector.squaredNorm();
  r.residual_energy = (x - r.vector).squaredNorm();
  return r;
}

namespace {

// Drop leaves with the smallest prize (tie -> lower node id) until the forest
// has at most `limit` nodes. Only reached on the cap-hit fallback path when
// the sparsity-vs-cost curve jumped over the target window.
void trim_forest(const Graph& g, const std::vector<double>& prizes,
                 PcstForest& f, int limit) {
  std::vector<char> in_nodes(g.num_nodes(), 0);
  for (int v : f.nodes) in_nodes[v] = 1;
  std::vector<int> degree(g.num_nodes(), 0);
  std::vector<char> in_edges(g.edges().size(), 0);
  for (int e : f.edges) {
    in_edges[e] = 1;
    ++degree[g.edges()[e].u];
    ++degree[g.edges()[e].v];
  }
  int count = static_cast<int>(f.nodes.size());
  while (count > limit) {
    int worst = -1;
    for (int v : f.nodes) {
      if (!in_nodes[v] || degree[v] > 1) continue;
      if (worst < 0 || prizes[v] < prizes[worst] ||
          (prizes[v] == prizes[worst] && v < worst))
        worst = v;
    }
    assert(worst >= 0);  // a forest always has a leaf or isolated node
    in_nodes[worst] = 0;
    --count;
    for (auto [u, e] : g.neighbors(worst))
      if (in_edges[e]) {
        in_edges[e] = 0;
        --degree[u];
        --degree[worst];
      }
  }
  PcstForest trimmed;
  for (int v : f.nodes)
    if (in_nodes[v]) trimmed.nodes.push_back(v);
  for (int e : f.edges)
    if (in_edges[e]) trimmed.edges.push_back(e);
  f = std::move(trimmed);
}

ProjectionResult graph_projection(const Graph& g, const Eigen::VectorXd& x,
                                  const ProjectionConfig& config) {
  config.validate();
  if (x.size() != g.num_nodes())
    throw std::invalid_argument("vector length must match the node count");
  if (!x.allFinite())
    throw std::invalid_argument("projection input must be finite");

  ProjectionResult r;
  double peak = 0.0;
  for (int v = 0; v < g.num_nodes(); ++v)
    peak = std::max(peak, std::abs(x[v]));
  if (peak == 0.0) {  // all-zero input: empty support is the valid answer
    r.vector = Eigen::VectorXd::Zero(x.size());
    r.residual_energy = 0.0;
    return r;
  }
  // PCST supports are invariant under a common rescale of prizes and costs,
  // so normalizing the peak prize to 1 keeps the fixed cost window meaningful
  // for gradients of any magnitude. Dividing before squaring keeps entries
  // near the representable limit from overflowing.
  std::vector<double> prizes(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) {
    double t = x[v] / peak;
    prizes[v] = t * t;
  }

  PcstInstance inst;
  inst.prizes = prizes;
  inst.target_components = config.wgm.components;

  // Bisect the cost multiplier: cheaper edges -> bigger forests. Track the
  // best fallback: smallest sparsity at or above s_low, else the largest seen.
  double lo = config.cost_low, hi = config.cost_high;
  PcstForest best;
  bool have_best = false;
  auto better = [&](int k_new, int k_old) {
    bool new_above = k_new >= config.s_low, old_above = k_old >= config.s_low;
    if (new_above != old_above) return new_above;
    return new_above ? k_new < k_old : k_new > k_old;
  };
  PcstForest chosen;
  bool done = false;
  for (int it = 0; it < config.max_binary_iters && !done; ++it) {
    inst.cost_scale = std::sqrt(lo * hi);
    PcstForest f = solve_pcst(g, inst);
    ++r.iterations_used;
    int k = static_cast<int>(f.nodes.size());
    if (!have_best || better(k, static_cast<int>(best.nodes.size()))) {
      best = f;
      have_best = true;
    }
    if (k >= config.s_low && k <= config.s_high) {
      chosen = std::move(f);
      done = true;
    } else if (k > config.s_high) {
      lo = inst.cost_scale;
    } else {
      hi = inst.cost_scale;
    }
  }
  if (!done) chosen = best;
  if (static_cast<int>(chosen.nodes.size()) > config.s_high)
    trim_forest(g, prizes, chosen, config.s_high);

  r.support = chosen.nodes;
  r.vector = restrict_to(x, r.support);
  r.achieved_sparsity = static_cast<int>(r.support.size());
  r.captured_energy = r.vector.squaredNorm();
  r.residual_energy = (x - r.vector).squaredNorm();
  return r;
}

}  // namespace

ProjectionResult head_projection(const Graph& g, const Eigen::VectorXd& x,
                                 const ProjectionConfig& config) {
  if (config.kind != ProjectionKind::head)
    throw std::invalid_argument("head_projection needs a head config");
  return graph_projection(g, x, config);
}

ProjectionResult tail_projection(const Graph& g, const Eigen::VectorXd& x,
                                 const ProjectionConfig& config) {
  if (config.kind != ProjectionKind::tail)
    throw std::invalid_argument("tail_projection needs a tail config");
  return graph_projection(g, x, config);
}

}  // namespace gsiht
