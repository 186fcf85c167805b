#pragma once

#include <cstdint>

#include "gsiht/graph.hpp"
#include "gsiht/losses.hpp"
#include "gsiht/rng.hpp"

namespace gsiht {

// Knobs for one synthetic recovery instance: a connected support is grown by
// random walk on the graph, the signal gets standard-normal nonzeros, the
// design is Gaussian with sd 1/sqrt(m), and the noise (if any) is rescaled to
// an exact norm.
struct SynthSpec {
  const Graph* graph = nullptr;
  int walk_start = -1;  // -1 = pick the grid center of a rows x cols layout
  int grid_rows = 0, grid_cols = 0;  // only consulted when walk_start = -1
  int s = 0;
  int m = 0;
  double noise_norm = 0.0;
  std::uint64_t seed = 0;
  long walk_step_cap = -1;               // -1 = 100 * s
  const Support* fixed_support = nullptr;  // bypass the walk entirely
};

struct SynthInstance {
  Instance inst;
  Eigen::VectorXd x_true;
  Support support;
};

// m x p matrix with i.i.d. N(0, 1/m) entries (standard deviation 1/sqrt(m)).
Eigen::MatrixXd gaussian_design(int m, int p, Rng& rng);

// Standard-normal values on `support`, zeros elsewhere; exact zeros redrawn.
Eigen::VectorXd planted_signal(const Support& support, int p, Rng& rng);

// N(0, I) draw rescaled so its euclidean norm is exactly `norm`.
Eigen::VectorXd scaled_noise(int m, double norm, Rng& rng);

// Assembles y = A x* + eps. Sub-streams for support/signal/design/noise are
// derived from spec.seed, so fixing the support does not shift the others.
SynthInstance synth_instance(const SynthSpec& spec);

}  // namespace gsiht
