#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "gsiht/graph.hpp"
#include "gsiht/losses.hpp"
#include "gsiht/projection.hpp"

namespace gsiht {

enum class ProjectionMode { graph, top_s };
enum class Batching { stochastic, full };
enum class LossKind { lsq, logistic };
enum class Termination { converged, epoch_cap, diverged };

// The four solver variants are the four (projection, batching) combinations:
// (graph, stochastic) = GraphStoIHT,  (graph, full) = GraphIHT,
// (top_s, stochastic) = StoIHT,       (top_s, full)  = IHT.
struct SolverConfig {
  ProjectionMode projection = ProjectionMode::graph;
  Batching batching = Batching::stochastic;
  LossKind loss = LossKind::lsq;
  WgmParams wgm;               // target model (s, g, C)
  int block_size = 0;          // 0 = all rows in one block
  double eta = 1.0;
  bool use_armijo = false;     // backtracking step size instead of fixed eta
  double armijo_shrink = 0.5;
  double armijo_slope = 1e-4;
  double armijo_eta0 = 1.0;
  int armijo_max_halvings = 20;
  double lambda = 0.0;         // logistic ridge weight
  int max_epochs = 500;
  long max_total_iters = 0;    // 0 = no cap; classification runs use 40
  double residual_tol = 1e-7;  // ||Ax - y|| stopping rule; lsq only
  bool iid_sampling = false;   // default: per-epoch permutation of blocks
  std::uint64_t seed = 0;
  // Filled from wgm when left default-constructed (s_high = 0).
  ProjectionConfig head_config, tail_config;
};

struct SolveTrace {
  Eigen::VectorXd final_x;
  std::vector<double> epoch_errors;     // ||x - x*|| at each epoch end
  std::vector<double> epoch_residuals;  // lsq: ||Ax-y||; logistic: objective
  std::vector<double> iter_errors;      // per-iteration ||x - x*||
  std::vector<double> step_sizes;       // per-iteration eta actually used
  std::vector<Support> iter_supports;   // nonzero coordinates after each step
  int epochs_run = 0;
  long iters_run = 0;
  Termination termination = Termination::epoch_cap;
};

// Run the hard-thresholding iteration from x = 0: draw a block (or use the
// full batch), head-project its gradient (graph mode) or take it raw (top_s
// mode), step, tail-project back onto the model.
SolveTrace solve(const Graph& g, const Instance& inst,
                 const SolverConfig& config,
                 const Eigen::VectorXd* x_star = nullptr);

// Largest eta0 * shrink^k, k in [0, max_halvings], with
// f(x + eta d) <= f(x) + slope_frac * eta * <grad f(x), d>; the smallest
// probe if none qualifies. slope must be the (negative) directional
// derivative <grad f(x), d>.
double armijo_line_search(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, const Eigen::VectorXd& direction, double f_at_x,
    double slope, double shrink = 0.5, double slope_frac = 1e-4,
    double eta0 = 1.0, int max_halvings = 20);

const char* solver_name(ProjectionMode projection, Batching batching);

}  // namespace gsiht
