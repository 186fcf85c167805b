#pragma once

#include <Eigen/Dense>

#include "gsiht/graph.hpp"
#include "gsiht/pcst.hpp"

namespace gsiht {

enum class ProjectionKind { head, tail };

// Sparsity window and model bounds for one binary-search projection.
// Factories encode the standard bounds: head searches around p/2, tail
// around the model sparsity s, both widened by omega.
struct ProjectionConfig {
  ProjectionKind kind = ProjectionKind::tail;
  WgmParams wgm;              // target model (s, g, C)
  int s_low = 0;
  int s_high = 0;             // = round(s_low * (1 + omega))
  double omega = 0.1;
  int max_binary_iters = 50;
  double cost_low = 1e-6;     // cost-multiplier search window (log bisection)
  double cost_high = 1e6;

  static ProjectionConfig head(int num_nodes, const WgmParams& wgm,
                               double omega = 0.1);
  static ProjectionConfig tail(const WgmParams& wgm, double omega = 0.1);

  // Model bounds a result of this projection is checked against: sparsity
  // s_high, same component count, budget widened by the extra nodes.
  WgmParams relaxed_wgm() const;

  void validate() const;  // throws std::invalid_argument
};

struct ProjectionResult {
  Support support;
  Eigen::VectorXd vector;      // input restricted to support
  int achieved_sparsity = 0;   // |support|
  int iterations_used = 0;     // PCST calls consumed by the search
  double captured_energy = 0.0;  // ||x_S||^2
  double residual_energy = 0.0;  // ||x - x_S||^2
};

Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const Support& support);

// Support of the s largest |x_i| (ties -> lower index). Exact zeros are never
// included, so the support can be smaller than s.
ProjectionResult top_s_projection(const Eigen::VectorXd& x, int s);

// Approximate head projection: a support capturing a constant fraction of the
// best model-sparse energy, found by bisecting the PCST edge-cost multiplier
// until the forest sparsity lands in [s_low, s_high].
ProjectionResult head_projection(const Graph& g, const Eigen::VectorXd& x,
                                 const ProjectionConfig& config);

// Approximate tail projection: a model support whose residual is within a
// constant factor of the best, same search mechanics with tail bounds.
ProjectionResult tail_projection(const Graph& g, const Eigen::VectorXd& x,
                                 const ProjectionConfig& config);

}  // namespace gsiht
