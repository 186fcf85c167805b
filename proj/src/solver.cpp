#include "gsiht/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gsiht/rng.hpp"

namespace gsiht {

double armijo_line_search(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, const Eigen::VectorXd& direction, double f_at_x,
    double slope, double shrink, double slope_frac, double eta0,
    int max_halvings) {
  if (!(slope < 0.0))
    throw std::invalid_argument("armijo_line_search: slope must be negative");
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("armijo_line_search: shrink must be in (0,1)");
  if (!(slope_frac > 0.0 && slope_frac < 1.0))
    throw std::invalid_argument(
        "armijo_line_search: slope_frac must be in (0,1)");
  if (!(eta0 > 0.0))
    throw std::invalid_argument("armijo_line_search: eta0 must be positive");
  if (max_halvings < 0)
    throw std::invalid_argument(
        "armijo_line_search: max_halvings must be >= 0");
  double eta = eta0;
  for (int k = 0;; ++k) {
    if (f(x + eta * direction) <= f_at_x + slope_frac * eta * slope)
      return eta;
    if (k == max_halvings) return eta;  // never satisfied: smallest probe
    eta *= shrink;
  }
}

const char* solver_name(ProjectionMode projection, Batching batching) {
  if (projection == ProjectionMode::graph)
    return batching == Batching::stochastic ? "GraphStoIHT" : "GraphIHT";
  return batching == Batching::stochastic ? "StoIHT" : "IHT";
}

SolveTrace solve(const Graph& g, const Instance& inst,
                 const SolverConfig& config, const Eigen::VectorXd* x_star) {
  const int m = static_cast<int>(inst.A.rows());
  const int p = static_cast<int>(inst.A.cols());
  if (m < 1 || p < 1) throw std::invalid_argument("solve: empty design matrix");
  if (inst.y.size() != m)
    throw std::invalid_argument("solve: y length does not match design rows");
  if (config.projection == ProjectionMode::graph && g.num_nodes() != p)
    throw std::invalid_argument(
        "solve: graph node count does not match feature count");
  if (config.wgm.sparsity < 1 || config.wgm.sparsity > p)
    throw std::invalid_argument("solve: sparsity must be in [1, p]");
  if (!config.use_armijo && !(config.eta > 0.0))
    throw std::invalid_argument("solve: eta must be positive");
  if (config.max_epochs < 1)
    throw std::invalid_argument("solve: max_epochs must be >= 1");
  if (config.max_total_iters < 0)
    throw std::invalid_argument("solve: max_total_iters must be >= 0");
  if (config.residual_tol < 0.0)
    throw std::invalid_argument("solve: residual_tol must be >= 0");
  if (x_star && x_star->size() != p)
    throw std::invalid_argument("solve: x_star length does not match p");

  // full batching means one block holding every row, whatever block_size says
  const int bs = config.batching == Batching::full || config.block_size <= 0
                     ? m
                     : std::min(config.block_size, m);
  const BlockPartition part = BlockPartition::with_block_size(m, bs);
  const int n = part.num_blocks();

  ProjectionConfig head = config.head_config;
  if (head.s_high == 0) head = ProjectionConfig::head(p, config.wgm);
  ProjectionConfig tail = config.tail_config;
  if (tail.s_high == 0) tail = ProjectionConfig::tail(config.wgm);
  head.validate();
  tail.validate();
  if (head.kind != ProjectionKind::head || tail.kind != ProjectionKind::tail)
    throw std::invalid_argument("solve: projection config kinds are swapped");

  Rng rng = make_rng(config.seed);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);

  SolveTrace trace;
  auto record_epoch = [&]() {
    if (x_star) trace.epoch_errors.push_back((x - *x_star).norm());
    trace.epoch_residuals.push_back(
        config.loss == LossKind::lsq
            ? (inst.A * x - inst.y).norm()
            : logistic_value(inst, part, kFullGradient, x, config.lambda));
    trace.epochs_run = static_cast<int>(trace.epoch_residuals.size());
  };

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const int iters_per_epoch = config.batching == Batching::full ? 1 : n;

  Termination term = Termination::epoch_cap;
  bool stop = false;
  for (int epoch = 0; epoch < config.max_epochs && !stop; ++epoch) {
    if (config.batching == Batching::stochastic && !config.iid_sampling)
      std::shuffle(perm.begin(), perm.end(), rng);
    for (int it = 0; it < iters_per_epoch; ++it) {
      int block = kFullGradient;
      if (config.batching == Batching::stochastic)
        block = config.iid_sampling
                    ? std::uniform_int_distribution<int>(0, n - 1)(rng)
                    : perm[it];
      ValueGrad vg =
          config.loss == LossKind::lsq
              ? lsq_value_grad(inst, part, block, x)
              : logistic_value_grad(inst, part, block, x, config.lambda);
      // a step size past the stability limit blows the iterate up; stop once
      // the numbers stop being meaningful instead of feeding inf downstream
      if (!std::isfinite(vg.value) || !vg.grad.allFinite()) {
        term = Termination::diverged;
        stop = true;
        break;
      }

      // graph mode steps along the head-projected gradient; top_s mode uses
      // the raw gradient and relies on the thresholding below
      Eigen::VectorXd b_t = config.projection == ProjectionMode::graph
                                ? head_projection(g, vg.grad, head).vector
                                : vg.grad;
      const double slope = -b_t.squaredNorm();
      double eta_t;
      if (slope == 0.0) {
        eta_t = 0.0;  // flat direction: nothing to move
      } else if (config.use_armijo) {
        auto f = [&](const Eigen::VectorXd& v) {
          return config.loss == LossKind::lsq
                     ? lsq_value(inst, part, block, v)
                     : logistic_value(inst, part, block, v, config.lambda);
        };
        eta_t = armijo_line_search(f, x, -b_t, vg.value, slope,
                                   config.armijo_shrink, config.armijo_slope,
                                   config.armijo_eta0,
                                   config.armijo_max_halvings);
      } else {
        eta_t = config.eta;
      }
      if (eta_t != 0.0) {
        Eigen::VectorXd z = x - eta_t * b_t;
        x = config.projection == ProjectionMode::graph
                ? tail_projection(g, z, tail).vector
                : top_s_projection(z, config.wgm.sparsity).vector;
      }
      trace.step_sizes.push_back(eta_t);
      Support supp;
      for (int i = 0; i < p; ++i)
        if (x[i] != 0.0) supp.push_back(i);
      trace.iter_supports.push_back(std::move(supp));
      if (x_star) trace.iter_errors.push_back((x - *x_star).norm());
      ++trace.iters_run;

      if (!x.allFinite()) {
        term = Termination::diverged;
        stop = true;
        break;
      }
      if (config.loss == LossKind::lsq &&
          (inst.A * x - inst.y).norm() <= config.residual_tol) {
        term = Termination::converged;
        stop = true;
        break;
      }
      if (config.max_total_iters > 0 &&
          trace.iters_run >= config.max_total_iters) {
        stop = true;
        break;
      }
    }
    record_epoch();
  }
  trace.termination = term;
  trace.final_x = std::move(x);
  return trace;
}

}  // namespace gsiht
