#include "gsiht/losses.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace gsiht {

BlockPartition::BlockPartition(int m, int num_blocks) {
  if (m < 1) throw std::invalid_argument("need at least one row");
  if (num_blocks < 1 || num_blocks > m)
    throw std::invalid_argument("block count must be in [1, m]");
  starts_.resize(num_blocks + 1);
  int base = m / num_blocks, extra = m % num_blocks;
  starts_[0] = 0;
  for (int i = 0; i < num_blocks; ++i)
    starts_[i + 1] = starts_[i] + base + (i < extra ? 1 : 0);
  assert(starts_.back() == m);
}

BlockPartition BlockPartition::with_block_size(int m, int block_size) {
  if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
  return BlockPartition(m, std::max(1, m / block_size));
}

namespace {

void check_dims(const Instance& inst, const BlockPartition& part,
                const Eigen::VectorXd& x) {
  if (inst.A.rows() != inst.y.size())
    throw std::invalid_argument("design and target row counts differ");
  if (part.rows() != inst.A.rows())
    throw std::invalid_argument("partition does not cover the design rows");
  if (x.size() != inst.A.cols())
    throw std::invalid_argument("x length must match the design columns");
}

void check_block(const BlockPartition& part, int block) {
  if (block != kFullGradient && (block < 0 || block >= part.num_blocks()))
    throw std::invalid_argument("block index out of range");
}

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) {
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

// 1 / (1 + exp(t)) without overflow.
double sigmoid_neg(double t) {
  if (t >= 0.0) {
    double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

}  // namespace

ValueGrad lsq_value_grad(const Instance& inst, const BlockPartition& part,
                         int block, const Eigen::VectorXd& x) {
  check_dims(inst, part, x);
  check_block(part, block);
  if (block != kFullGradient) {
    int b0 = part.begin(block), bs = part.size(block);
    Eigen::VectorXd r = inst.A.middleRows(b0, bs) * x - inst.y.segment(b0, bs);
    ValueGrad out;
    out.value = 0.5 * r.squaredNorm();
    out.grad = inst.A.middleRows(b0, bs).transpose() * r;
    return out;
  }
  ValueGrad out;
  out.grad = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i < part.num_blocks(); ++i) {
    ValueGrad vi = lsq_value_grad(inst, part, i, x);
    out.value += vi.value;
    out.grad += vi.grad;
  }
  out.value /= part.num_blocks();
  out.grad /= part.num_blocks();
  return out;
}

double lsq_value(const Instance& inst, const BlockPartition& part, int block,
                 const Eigen::VectorXd& x) {
  check_dims(inst, part, x);
  check_block(part, block);
  if (block != kFullGradient) {
    int b0 = part.begin(block), bs = part.size(block);
    return 0.5 *
           (inst.A.middleRows(b0, bs) * x - inst.y.segment(b0, bs))
               .squaredNorm();
  }
  double v = 0.0;
  for (int i = 0; i < part.num_blocks(); ++i) v += lsq_value(inst, part, i, x);
  return v / part.num_blocks();
}

ValueGrad logistic_value_grad(const Instance& inst, const BlockPartition& part,
                              int block, const Eigen::VectorXd& x,
                              double lambda) {
  check_dims(inst, part, x);
  check_block(part, block);
  if (!(lambda >= 0.0))
    throw std::invalid_argument("lambda must be non-negative");
  if (block != kFullGradient) {
    int b0 = part.begin(block), bs = part.size(block);
    Eigen::VectorXd margins = inst.A.middleRows(b0, bs) * x;
    double sum = 0.0;
    Eigen::VectorXd w(bs);
    for (int j = 0; j < bs; ++j) {
      double yj = inst.y[b0 + j];
      if (yj != 1.0 && yj != -1.0)
        throw std::invalid_argument("logistic labels must be exactly +1 or -1");
      double t = yj * margins[j];
      sum += softplus_neg(t);
      w[j] = -yj * sigmoid_neg(t);
    }
    ValueGrad out;
    out.value = sum / bs + 0.5 * lambda * x.squaredNorm();
    out.grad = inst.A.middleRows(b0, bs).transpose() * w / bs + lambda * x;
    return out;
  }
  ValueGrad out;
  out.grad = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i < part.num_blocks(); ++i) {
    ValueGrad vi = logistic_value_grad(inst, part, i, x, lambda);
    out.value += vi.value;
    out.grad += vi.grad;
  }
  out.value /= part.num_blocks();
  out.grad /= part.num_blocks();
  return out;
}

double logistic_value(const Instance& inst, const BlockPartition& part,
                      int block, const Eigen::VectorXd& x, double lambda) {
  check_dims(inst, part, x);
  check_block(part, block);
  if (!(lambda >= 0.0))
    throw std::invalid_argument("lambda must be non-negative");
  if (block != kFullGradient) {
    int b0 = part.begin(block), bs = part.size(block);
    Eigen::VectorXd margins = inst.A.middleRows(b0, bs) * x;
    double sum = 0.0;
    for (int j = 0; j < bs; ++j) {
      double yj = inst.y[b0 + j];
      if (yj != 1.0 && yj != -1.0)
        throw std::invalid_argument("logistic labels must be exactly +1 or -1");
      sum += softplus_neg(yj * margins[j]);
    }
    return sum / bs + 0.5 * lambda * x.squaredNorm();
  }
  double v = 0.0;
  for (int i = 0; i < part.num_blocks(); ++i)
    v += logistic_value(inst, part, i, x, lambda);
  return v / part.num_blocks();
}

double theta_max(const Instance& inst, const BlockPartition& part, int block) {
  check_dims(inst, part, Eigen::VectorXd::Zero(inst.A.cols()));
  check_block(part, block);
  int b0 = block == kFullGradient ? 0 : part.begin(block);
  int bs = block == kFullGradient ? part.rows() : part.size(block);
  auto M = inst.A.middleRows(b0, bs);
  int p = static_cast<int>(inst.A.cols());

  Eigen::VectorXd v = Eigen::VectorXd::Ones(p) / std::sqrt(double(p));
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Eigen::VectorXd w = M.transpose() * (M * v);
    double nw = w.norm();
    if (nw == 0.0) {
      // Start vector orthogonal to the range; restart from the heaviest
      // column's basis vector (or give up on an all-zero block).
      int best = 0;
      double bestn = M.col(0).squaredNorm();
      for (int j = 1; j < p; ++j) {
        double nj = M.col(j).squaredNorm();
        if (nj > bestn) {
          bestn = nj;
          best = j;
        }
      }
      if (bestn == 0.0) return 0.0;
      v = Eigen::VectorXd::Unit(p, best);
      lambda = 0.0;
      continue;
    }
    double next = v.dot(w);  // Rayleigh quotient, ||v|| = 1
    v = w / nw;
    if (std::abs(next - lambda) <= 1e-9 * std::max(std::abs(next), 1e-30))
      return next;
    lambda = next;
  }
  return lambda;
}

double contraction_factor(const ContractionQuery& q) {
  if (!(q.c_h > 0.0 && q.c_h <= 1.0))
    throw std::invalid_argument("head factor must be in (0,1]");
  if (!(q.c_t >= 1.0)) throw std::invalid_argument("tail factor must be >= 1");
  switch (q.kind) {
    case ContractionKind::general: {
      if (!(q.alpha > 0.0 && q.beta >= q.alpha))
        throw std::invalid_argument("need 0 < alpha <= beta");
      double top = 2.0 / q.beta;
      // tau_reference hits exactly 2/beta when c_h = 1; allow the endpoint.
      double tol = 1e-12 * top;
      if (!(q.eta > 0.0 && q.eta <= top + tol) ||
          !(q.tau > 0.0 && q.tau <= top + tol))
        throw std::invalid_argument("eta and tau must lie in (0, 2/beta]");
      double disc_tau = q.alpha * q.beta * q.tau * q.tau - 2.0 * q.alpha * q.tau + 1.0;
      double disc_eta = q.alpha * q.beta * q.eta * q.eta - 2.0 * q.alpha * q.eta + 1.0;
      assert(disc_tau >= -1e-15 && disc_eta >= -1e-15);
      double alpha0 =
          q.c_h * q.alpha * q.tau - std::sqrt(std::max(0.0, disc_tau));
      if (std::abs(alpha0) > 1.0)
        throw std::invalid_argument("tau outside the contractive range");
      return (1.0 + q.c_t) * (std::sqrt(std::max(0.0, disc_eta)) +
                              std::sqrt(1.0 - alpha0 * alpha0));
    }
    case ContractionKind::limit: {
      if (!(q.mu >= 0.0 && q.mu <= 1.0))
        throw std::invalid_argument("mu must lie in [0,1]");
      return (1.0 + q.c_t) * (1.0 + 2.0 * std::sqrt(q.mu)) *
             std::sqrt(1.0 - q.mu);
    }
    case ContractionKind::table1_batch: {
      if (!(q.delta >= 0.0 && q.delta <= 1.0))
        throw std::invalid_argument("delta must lie in [0,1]");
      return (1.0 + q.c_t) *
             (std::sqrt(q.delta) + 2.0 * std::sqrt(1.0 - q.delta)) *
             std::sqrt(q.delta);
    }
    case ContractionKind::table1_sto: {
      if (!(q.delta >= 0.0 && q.delta <= 1.0))
        throw std::invalid_argument("delta must lie in [0,1]");
      double d = q.delta;
      return (1.0 + q.c_t) *
             (std::sqrt(2.0 / (1.0 + d)) +
              2.0 * std::sqrt(2.0 * (1.0 - d)) / (1.0 + d)) *
             std::sqrt(d);
    }
  }
  throw std::invalid_argument("unknown contraction variant");
}

double tau_reference(double alpha, double beta, double c_h) {
  if (!(alpha > 0.0 && beta >= alpha))
    throw std::invalid_argument("need 0 < alpha <= beta");
  if (!(c_h > 0.0 && c_h <= 1.0))
    throw std::invalid_argument("head factor must be in (0,1]");
  double denom = beta - c_h * c_h * alpha;
  if (denom <= 0.0) {
    // only possible at alpha = beta, c_h = 1: the ratio tends to 1
    return 2.0 / beta;
  }
  return (1.0 + c_h * std::sqrt((beta - alpha) / denom)) / beta;
}

LogisticCondition logistic_condition(double lambda, double theta, int n, int m,
                                     double nu) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(theta >= 0.0)) throw std::invalid_argument("theta_max must be >= 0");
  if (n < 1 || m < 1) throw std::invalid_argument("need n, m >= 1");
  if (!(nu >= 1.0)) throw std::invalid_argument("nu must be >= 1");
  double denom = lambda + n * (1.0 + nu) * theta / (4.0 * m);
  if (denom == 0.0)
    throw std::invalid_argument("zero ridge and zero curvature");
  LogisticCondition out;
  out.mu = lambda / denom;
  out.satisfied = out.mu >= kLogisticMuThreshold;
  return out;
}

}  // namespace gsiht
