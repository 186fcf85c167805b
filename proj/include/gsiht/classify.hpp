#pragma once

#include <string>
#include <vector>

#include "gsiht/experiments.hpp"

namespace gsiht {

struct Dataset {
  Eigen::MatrixXd x;                       // m observations by p features
  std::vector<int> labels;                 // +1 / -1
  std::vector<std::string> feature_names;  // p names, label column removed
};

// Header row with feature names plus exactly one "label" column; labels must
// be +1/-1. Malformed input fails with file:line diagnostics.
Dataset load_dataset_csv(const std::string& path);

// In-place per-feature standardization over the whole matrix (population
// standard deviation); constant features become all-zero columns.
void zscore_features(Eigen::MatrixXd& x);

struct ClassifyConfig {
  int folds = 5;
  std::vector<int> s_grid;                    // empty = 10,15,...,100
  std::vector<double> lambda_grid{1e-3, 1e-4};
  std::vector<double> b_fractions{1.0, 0.5};  // of the training-set size
  int max_iters = 40;                         // total solver iterations
  int g = 1;
  std::vector<SolverKind> solvers{SolverKind::graph_sto_iht};
  ExecMode exec = ExecMode::serial;
  std::uint64_t seed = 0;
};

// k-fold cross validation with nested k-fold tuning of (s, lambda, b) by
// mean validation AUC (ties: smaller s, then smaller lambda, then earlier
// block fraction). Per-fold rows report AUC, balanced error, support size
// and the selected hyperparameters; fold-less rows carry mean and stddev.
Report run_classification(const Graph& g, const Dataset& data,
                          const ClassifyConfig& cfg);

}  // namespace gsiht
