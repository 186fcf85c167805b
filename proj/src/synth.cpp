#include "gsiht/synth.hpp"

#include <random>
#include <stdexcept>

namespace gsiht {

Eigen::MatrixXd gaussian_design(int m, int p, Rng& rng) {
  if (m < 1 || p < 1)
    throw std::invalid_argument("gaussian_design: dimensions must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(double(m)));
  Eigen::MatrixXd a(m, p);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = normal(rng);
  return a;
}

Eigen::VectorXd planted_signal(const Support& support, int p, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  for (int v : support) {
    if (v < 0 || v >= p)
      throw std::invalid_argument("planted_signal: support index out of range");
    double value = normal(rng);
    while (value == 0.0) value = normal(rng);  // keep the support exact
    x[v] = value;
  }
  return x;
}

Eigen::VectorXd scaled_noise(int m, double norm, Rng& rng) {
  if (m < 1) throw std::invalid_argument("scaled_noise: m must be >= 1");
  if (norm < 0.0)
    throw std::invalid_argument("scaled_noise: norm must be >= 0");
  Eigen::VectorXd eps = Eigen::VectorXd::Zero(m);
  if (norm == 0.0) return eps;
  std::normal_distribution<double> normal(0.0, 1.0);
  double len = 0.0;
  do {
    for (int i = 0; i < m; ++i) eps[i] = normal(rng);
    len = eps.norm();
  } while (len == 0.0);
  return eps * (norm / len);
}

SynthInstance synth_instance(const SynthSpec& spec) {
  if (!spec.graph) throw std::invalid_argument("synth_instance: graph not set");
  const int p = spec.graph->num_nodes();
  if (spec.s < 1 || spec.s > p)
    throw std::invalid_argument("synth_instance: s must be in [1, p]");
  if (spec.m < 1) throw std::invalid_argument("synth_instance: m must be >= 1");
  if (spec.noise_norm < 0.0)
    throw std::invalid_argument("synth_instance: noise_norm must be >= 0");

  SynthInstance out;
  if (spec.fixed_support) {
    out.support = *spec.fixed_support;
    validate_support(*spec.graph, out.support);
    if (static_cast<int>(out.support.size()) != spec.s)
      throw std::invalid_argument(
          "synth_instance: fixed support size differs from s");
  } else {
    int start = spec.walk_start;
    if (start < 0) {
      if (spec.grid_rows < 1 || spec.grid_cols < 1)
        throw std::invalid_argument(
            "synth_instance: walk_start unset and no grid shape given");
      start = grid_center(spec.grid_rows, spec.grid_cols);
    }
    Rng walk_rng = make_rng(derive_seed(spec.seed, 1));
    out.support = random_walk_support(*spec.graph, start, spec.s, walk_rng,
                                      spec.walk_step_cap);
  }

  Rng signal_rng = make_rng(derive_seed(spec.seed, 2));
  out.x_true = planted_signal(out.support, p, signal_rng);

  Rng design_rng = make_rng(derive_seed(spec.seed, 3));
  out.inst.A = gaussian_design(spec.m, p, design_rng);

  Rng noise_rng = make_rng(derive_seed(spec.seed, 4));
  Eigen::VectorXd eps = scaled_noise(spec.m, spec.noise_norm, noise_rng);
  out.inst.y = out.inst.A * out.x_true + eps;
  out.inst.classification = false;
  return out;
}

}  // namespace gsiht
