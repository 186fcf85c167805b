#pragma once

#include <vector>

#include "gsiht/rng.hpp"

namespace gsiht {

// Sorted copy of `values` with floor(trim_fraction * n) entries dropped from
// each end. Throws if trimming would leave nothing.
std::vector<double> trimmed_trials(const std::vector<double>& values,
                                   double trim_fraction);

// Fraction of errors at or below the threshold.
double probability_of_recovery(const std::vector<double>& errors,
                               double threshold);

// Mann-Whitney AUC: probability a random positive outscores a random
// negative, ties counted one half. Labels must be +1/-1 with both present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Mean of the false-negative and false-positive rates.
double balanced_error(const std::vector<int>& predictions,
                      const std::vector<int>& labels);

// k disjoint folds covering [0, m), sizes differing by at most one; each
// fold comes back sorted.
std::vector<std::vector<int>> kfold_split(int m, int k, Rng& rng);

}  // namespace gsiht
