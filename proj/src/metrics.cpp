#include "gsiht/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gsiht {

std::vector<double> trimmed_trials(const std::vector<double>& values,
                                   double trim_fraction) {
  if (values.empty())
    throw std::invalid_argument("trimmed_trials: empty input");
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5))
    throw std::invalid_argument(
        "trimmed_trials: trim_fraction must be in [0, 0.5)");
  const auto n = values.size();
  const auto cut = static_cast<size_t>(std::floor(trim_fraction * double(n)));
  if (2 * cut >= n)
    throw std::invalid_argument("trimmed_trials: trimming removes everything");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  return std::vector<double>(sorted.begin() + cut, sorted.end() - cut);
}

double probability_of_recovery(const std::vector<double>& errors,
                               double threshold) {
  if (errors.empty())
    throw std::invalid_argument("probability_of_recovery: empty input");
  size_t hits = 0;
  for (double e : errors)
    if (e <= threshold) ++hits;
  return double(hits) / double(errors.size());
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auc: scores/labels length mismatch");
  size_t pos = 0, neg = 0;
  for (int l : labels) {
    if (l == 1)
      ++pos;
    else if (l == -1)
      ++neg;
    else
      throw std::invalid_argument("auc: labels must be +1 or -1");
  }
  if (pos == 0 || neg == 0)
    throw std::invalid_argument("auc: both classes must be present");

  // average ranks give tied pairs exactly half credit
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * (double(i) + double(j)) + 1.0;  // 1-based
    for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double pos_rank_sum = 0.0;
  for (size_t k = 0; k < n; ++k)
    if (labels[k] == 1) pos_rank_sum += rank[k];
  return (pos_rank_sum - 0.5 * double(pos) * double(pos + 1)) /
         (double(pos) * double(neg));
}

double balanced_error(const std::vector<int>& predictions,
                      const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument(
        "balanced_error: predictions/labels length mismatch");
  size_t pos = 0, neg = 0, fn = 0, fp = 0;
  for (size_t k = 0; k < labels.size(); ++k) {
    if (predictions[k] != 1 && predictions[k] != -1)
      throw std::invalid_argument("balanced_error: predictions must be +1/-1");
    if (labels[k] == 1) {
      ++pos;
      if (predictions[k] == -1) ++fn;
    } else if (labels[k] == -1) {
      ++neg;
      if (predictions[k] == 1) ++fp;
    } else {
      throw std::invalid_argument("balanced_error: labels must be +1 or -1");
    }
  }
  if (pos == 0 || neg == 0)
    throw std::invalid_argument("balanced_error: both classes must be present");
  return 0.5 * (double(fn) / double(pos) + double(fp) / double(neg));
}

std::vector<std::vector<int>> kfold_split(int m, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("kfold_split: k must be >= 1");
  if (k > m) throw std::invalid_argument("kfold_split: k must be <= m");
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::vector<int>> folds(k);
  for (int i = 0; i < m; ++i) folds[i % k].push_back(idx[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

}  // namespace gsiht
