#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "gsiht/metrics.hpp"

using namespace gsiht;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("trimming removes floor(fraction * n) from each tail") {
  std::vector<double> fifty(50);
  std::iota(fifty.begin(), fifty.end(), 1.0);
  std::vector<double> kept = trimmed_trials(fifty, 0.05);
  CHECK(kept.size() == 46);  // two cut per side
  CHECK(kept.front() == 3.0);
  CHECK(kept.back() == 48.0);

  std::vector<double> five = {5, 1, 4, 2, 3};
  CHECK(trimmed_trials(five, 0.2) == std::vector<double>{2, 3, 4});

  // zero trim keeps everything (sorted)
  CHECK(trimmed_trials(five, 0.0) == std::vector<double>{1, 2, 3, 4, 5});

  CHECK_THROWS_AS(trimmed_trials({}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(trimmed_trials(five, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(trimmed_trials(five, -0.1), std::invalid_argument);
}

TEST_CASE("recovery probability counts errors at or below the threshold") {
  std::vector<double> errors = {1e-7, 2e-6, 5e-7};
  CHECK(probability_of_recovery(errors, 1e-6) == doctest::Approx(2.0 / 3.0));
  CHECK(probability_of_recovery({0.1, 0.2}, 0.2) == 1.0);  // boundary included
  CHECK(probability_of_recovery({0.1, 0.2}, 0.05) == 0.0);
  CHECK_THROWS_AS(probability_of_recovery({}, 1.0), std::invalid_argument);
}

TEST_CASE("auc separates a perfectly ranked set") {
  CHECK(auc({0.9, 0.1, 0.8, 0.4}, {1, -1, 1, -1}) == 1.0);
  CHECK(auc({0.2, 0.8}, {1, -1}) == 0.0);
  CHECK(auc({0.5, 0.5}, {1, -1}) == 0.5);  // ties get half credit
  CHECK(auc({1.0, 1.0, 1.0, 1.0}, {1, -1, 1, -1}) == 0.5);
  // one inversion among 2x2 pairs
  CHECK(auc({0.9, 0.6, 0.5, 0.1}, {1, -1, 1, -1}) == doctest::Approx(0.75));
}

TEST_CASE("auc is invariant under monotone score transforms") {
  std::vector<double> scores = {0.3, -1.2, 0.7, 0.1, -0.4, 2.0};
  std::vector<int> labels = {1, -1, 1, -1, -1, 1};
  double base = auc(scores, labels);
  std::vector<double> shifted, expd;
  for (double s : scores) {
    shifted.push_back(3.0 * s + 11.0);
    expd.push_back(std::exp(s));
  }
  CHECK(auc(shifted, labels) == base);
  CHECK(auc(expd, labels) == base);
}

TEST_CASE("auc rejects degenerate inputs") {
  CHECK_THROWS_AS(auc({0.1, 0.2}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(auc({0.1, 0.2}, {-1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(auc({0.1, 0.2}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(auc({0.1}, {1, -1}), std::invalid_argument);
}

TEST_CASE("balanced error averages the two class error rates") {
  CHECK(balanced_error({1, -1, 1, -1}, {1, -1, 1, -1}) == 0.0);
  CHECK(balanced_error({-1, 1, -1, 1}, {1, -1, 1, -1}) == 1.0);
  // all-positive predictor: no false negatives, every negative wrong
  CHECK(balanced_error({1, 1, 1, 1}, {1, -1, 1, -1}) == 0.5);
}

TEST_CASE("balanced error on skewed classes") {
  // three positives one negative; one FN -> 0.5 * (1/3 + 0)
  CHECK(balanced_error({1, 1, -1, -1}, {1, 1, 1, -1}) ==
        doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(balanced_error({1, 0}, {1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(balanced_error({1, 1}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(balanced_error({1, 1}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(balanced_error({1}, {1, -1}), std::invalid_argument);
}

TEST_CASE("k-fold split partitions the index range") {
  Rng rng = make_rng(181);
  auto folds = kfold_split(10, 5, rng);
  REQUIRE(folds.size() == 5);
  std::set<int> seen;
  for (const auto& f : folds) {
    CHECK(f.size() == 2);
    CHECK(std::is_sorted(f.begin(), f.end()));
    for (int i : f) {
      CHECK(seen.insert(i).second);  // no index in two folds
      CHECK(i >= 0);
      CHECK(i < 10);
    }
  }
  CHECK(seen.size() == 10);

  auto uneven = kfold_split(7, 3, rng);
  std::vector<size_t> sizes;
  for (const auto& f : uneven) sizes.push_back(f.size());
  CHECK(sizes == std::vector<size_t>{3, 2, 2});
}

TEST_CASE("k-fold split is reproducible and validates k") {
  Rng a = make_rng(191), b = make_rng(191);
  CHECK(kfold_split(12, 4, a) == kfold_split(12, 4, b));
  Rng rng = make_rng(193);
  CHECK_THROWS_AS(kfold_split(5, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(kfold_split(5, 6, rng), std::invalid_argument);
  CHECK_NOTHROW(kfold_split(5, 5, rng));
}

TEST_SUITE_END();
