#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gsiht {

struct Instance {
  Eigen::MatrixXd A;  // m x p design
  Eigen::VectorXd y;  // m targets; exactly ±1 when classification is set
  bool classification = false;
};

// Contiguous partition of [0, m) into n blocks whose sizes differ by at most
// one (the first m mod n blocks get the extra row).
class BlockPartition {
 public:
  BlockPartition(int m, int num_blocks);
  // n = max(1, floor(m / block_size)); equals exact b-sized blocks when b | m.
  static BlockPartition with_block_size(int m, int block_size);

  int num_blocks() const { return static_cast<int>(starts_.size()) - 1; }
  int rows() const { return starts_.back(); }
  int begin(int block) const { return starts_[block]; }
  int size(int block) const { return starts_[block + 1] - starts_[block]; }

 private:
  std::vector<int> starts_;
};

inline constexpr int kFullGradient = -1;

struct ValueGrad {
  double value = 0.0;
  Eigen::VectorXd grad;
};

// Block least squares f_i(x) = (1/2) ||A_i x - y_i||^2 with gradient
// A_i^T (A_i x - y_i): the plain unnormalized block residual, so stochastic
// steps stay small (stable at unit learning rate) while the single-block
// batch partition gives the familiar (1/2)||A x - y||^2 with gradient
// A^T (A x - y). block = kFullGradient averages the blocks in index order,
// so the batch path and the mean of the block paths agree to the last bit.
ValueGrad lsq_value_grad(const Instance& inst, const BlockPartition& part,
                         int block, const Eigen::VectorXd& x);
double lsq_value(const Instance& inst, const BlockPartition& part, int block,
                 const Eigen::VectorXd& x);

// Block ridge-regularized logistic loss
// f_i(x) = (1/b_i) sum_j log(1+exp(-y_j a_j.x)) + (lambda/2)||x||^2,
// gradient (1/b_i) sum_j -y_j a_j / (1+exp(y_j a_j.x)) + lambda x,
// in the overflow-guarded form.
ValueGrad logistic_value_grad(const Instance& inst, const BlockPartition& part,
                              int block, const Eigen::VectorXd& x,
                              double lambda);
double logistic_value(const Instance& inst, const BlockPartition& part,
                      int block, const Eigen::VectorXd& x, double lambda);

// Largest eigenvalue of A_i^T A_i: power iteration from the normalized
// all-ones vector, 1e-9 relative tolerance, 1000 iteration cap.
double theta_max(const Instance& inst, const BlockPartition& part, int block);

enum class ContractionKind { general, limit, table1_batch, table1_sto };

struct ContractionQuery {
  ContractionKind kind = ContractionKind::limit;
  double alpha = 0.0;  // restricted strong convexity
  double beta = 0.0;   // restricted smoothness
  double eta = 0.0;    // learning rate (general)
  double tau = 0.0;    // free parameter (general)
  double c_h = 1.0;    // head factor in (0,1]
  double c_t = 1.0;    // tail factor >= 1
  double mu = 0.0;     // alpha/beta (limit)
  double delta = 0.0;  // RIP-style constant (table1 variants)
};

// Per-iteration contraction factor of the four published closed forms.
double contraction_factor(const ContractionQuery& q);

// The tau at which the general factor meets the limit form:
// (1/beta) * (1 + c_h * sqrt((beta-alpha)/(beta - c_h^2 alpha))).
double tau_reference(double alpha, double beta, double c_h);

struct LogisticCondition {
  double mu = 0.0;
  bool satisfied = false;
};

// mu = lambda / (lambda + n (1+nu) theta / (4 m)); satisfied iff
// mu >= 243/250.
LogisticCondition logistic_condition(double lambda, double theta, int n, int m,
                                     double nu);

inline constexpr double kLogisticMuThreshold = 243.0 / 250.0;

}  // namespace gsiht
