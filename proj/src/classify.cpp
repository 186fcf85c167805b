#include "gsiht/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gsiht/metrics.hpp"

namespace gsiht {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

[[noreturn]] void fail_at(const std::string& path, int lineno,
                          const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + msg);
}

double parse_number(const std::string& path, int lineno,
                    const std::string& cell) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty())
    fail_at(path, lineno, "expected a number, got '" + cell + "'");
  return v;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file, expected a header row");
  auto header = split_cells(line);
  int label_col = -1;
  for (size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "label") {
      if (label_col >= 0) fail_at(path, 1, "duplicate 'label' column");
      label_col = int(j);
    }
  }
  if (label_col < 0) fail_at(path, 1, "no 'label' column in header");
  if (header.size() < 2) fail_at(path, 1, "no feature columns");

  Dataset data;
  for (size_t j = 0; j < header.size(); ++j)
    if (int(j) != label_col) data.feature_names.push_back(header[j]);

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_cells(line);
    if (cells.size() != header.size())
      fail_at(path, lineno,
              "expected " + std::to_string(header.size()) + " cells, got " +
                  std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(header.size() - 1);
    for (size_t j = 0; j < cells.size(); ++j) {
      double v = parse_number(path, lineno, cells[j]);
      if (int(j) == label_col) {
        if (v != 1.0 && v != -1.0)
          fail_at(path, lineno, "label must be +1 or -1, got '" + cells[j] +
                                    "'");
        data.labels.push_back(int(v));
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");

  data.x.resize(rows.size(), header.size() - 1);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j + 1 < header.size(); ++j) data.x(i, j) = rows[i][j];
  return data;
}

void zscore_features(Eigen::MatrixXd& x) {
  const auto m = x.rows();
  if (m < 1) return;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    const double var = (x.col(j).array() - mean).square().sum() / double(m);
    const double sd = std::sqrt(var);
    if (sd == 0.0)
      x.col(j).setZero();  // constant feature carries no signal
    else
      x.col(j) = (x.col(j).array() - mean) / sd;
  }
}

namespace {

struct Combo {
  int s = 0;
  double lambda = 0.0;
  int bf_index = 0;
  double block_fraction = 1.0;
  double mean_val_auc = -1.0;
};

// best mean validation AUC; ties go to smaller s, then smaller lambda, then
// earlier block fraction
bool combo_better(const Combo& a, const Combo& b) {
  if (a.mean_val_auc != b.mean_val_auc)
    return a.mean_val_auc > b.mean_val_auc;
  if (a.s != b.s) return a.s < b.s;
  if (a.lambda != b.lambda) return a.lambda < b.lambda;
  return a.bf_index < b.bf_index;
}

Instance subset_instance(const Eigen::MatrixXd& x,
                         const std::vector<int>& labels,
                         const std::vector<int>& rows) {
  Instance inst;
  inst.A.resize(rows.size(), x.cols());
  inst.y.resize(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    inst.A.row(i) = x.row(rows[i]);
    inst.y[i] = double(labels[rows[i]]);
  }
  inst.classification = true;
  return inst;
}

SolverConfig classify_solver_config(const ClassifyConfig& cfg, SolverKind kind,
                                    const Combo& combo, int train_size,
                                    std::uint64_t seed) {
  SolverConfig sc = base_solver_config(kind);
  sc.loss = LossKind::logistic;
  sc.lambda = combo.lambda;
  sc.wgm = WgmParams{combo.s, cfg.g,
                     std::numeric_limits<double>::infinity()};
  sc.block_size = std::max(
      1, int(std::llround(combo.block_fraction * double(train_size))));
  sc.use_armijo = true;
  sc.max_total_iters = cfg.max_iters;
  sc.max_epochs = cfg.max_iters;  // at least one iteration per epoch
  sc.residual_tol = 0.0;
  sc.seed = seed;
  return sc;
}

std::vector<double> scores_for(const Eigen::MatrixXd& x,
                               const std::vector<int>& rows,
                               const Eigen::VectorXd& w) {
  std::vector<double> s(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) s[i] = x.row(rows[i]).dot(w);
  return s;
}

std::vector<int> labels_for(const std::vector<int>& labels,
                            const std::vector<int>& rows) {
  std::vector<int> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = labels[rows[i]];
  return out;
}

}  // namespace

Report run_classification(const Graph& g, const Dataset& data,
                          const ClassifyConfig& cfg) {
  const int m = int(data.x.rows());
  const int p = int(data.x.cols());
  if (m < 1 || p < 1)
    throw std::invalid_argument("classify: empty dataset");
  if (int(data.labels.size()) != m)
    throw std::invalid_argument("classify: label count mismatch");
  if (g.num_nodes() != p)
    throw std::invalid_argument(
        "classify: graph node count does not match feature count");
  if (cfg.folds < 2) throw std::invalid_argument("classify: folds must be >= 2");
  if (m < 2 * cfg.folds)
    throw std::invalid_argument(
        "classify: need at least two observations per fold for nested tuning");
  if (cfg.g < 1) throw std::invalid_argument("classify: g must be >= 1");
  if (cfg.max_iters < 1)
    throw std::invalid_argument("classify: max_iters must be >= 1");
  if (cfg.solvers.empty())
    throw std::invalid_argument("classify: no solvers selected");
  int pos = 0, neg = 0;
  for (int l : data.labels) {
    if (l == 1)
      ++pos;
    else if (l == -1)
      ++neg;
    else
      throw std::invalid_argument("classify: labels must be +1 or -1");
  }
  if (pos == 0 || neg == 0)
    throw std::invalid_argument("classify: both classes must be present");

  std::vector<int> s_grid = cfg.s_grid;
  if (s_grid.empty())
    for (int s = 10; s <= 100; s += 5) s_grid.push_back(s);
  s_grid.erase(std::remove_if(s_grid.begin(), s_grid.end(),
                              [&](int s) { return s < 1 || s > p; }),
               s_grid.end());
  if (s_grid.empty())
    throw std::invalid_argument("classify: sparsity grid empty after "
                                "removing values outside [1, p]");
  if (cfg.lambda_grid.empty() || cfg.b_fractions.empty())
    throw std::invalid_argument("classify: empty tuning grid");
  for (double l : cfg.lambda_grid)
    if (l < 0.0)
      throw std::invalid_argument("classify: lambda must be >= 0");
  for (double bf : cfg.b_fractions)
    if (!(bf > 0.0 && bf <= 1.0))
      throw std::invalid_argument(
          "classify: block fractions must be in (0, 1]");

  Eigen::MatrixXd x = data.x;
  zscore_features(x);

  Rng fold_rng = make_rng(derive_seed(cfg.seed, 1));
  const auto outer = kfold_split(m, cfg.folds, fold_rng);
  const int nk = int(cfg.solvers.size());

  std::vector<Combo> combos;
  for (int s : s_grid)
    for (double lambda : cfg.lambda_grid)
      for (size_t bi = 0; bi < cfg.b_fractions.size(); ++bi)
        combos.push_back(Combo{s, lambda, int(bi), cfg.b_fractions[bi], -1.0});

  std::vector<std::vector<ReportRow>> fold_rows(cfg.folds);
  // per (fold, solver) test AUC / balanced error for the aggregate rows
  std::vector<double> fold_auc(size_t(cfg.folds) * nk,
                               std::numeric_limits<double>::quiet_NaN());
  std::vector<double> fold_bal(size_t(cfg.folds) * nk,
                               std::numeric_limits<double>::quiet_NaN());

  for_each_index(cfg.folds, cfg.exec, [&](int f) {
    const auto& test = outer[f];
    std::vector<int> train;
    for (int other = 0; other < cfg.folds; ++other)
      if (other != f)
        train.insert(train.end(), outer[other].begin(), outer[other].end());
    std::sort(train.begin(), train.end());

    Rng inner_rng = make_rng(derive_seed(cfg.seed, 2, std::uint64_t(f)));
    const auto inner = kfold_split(int(train.size()), cfg.folds, inner_rng);

    for (int k = 0; k < nk; ++k) {
      std::vector<Combo> scored = combos;
      for (size_t c = 0; c < scored.size(); ++c) {
        double sum = 0.0;
        int valid = 0;
        for (int i = 0; i < cfg.folds; ++i) {
          std::vector<int> tr, val;
          for (int j = 0; j < cfg.folds; ++j)
            for (int local : inner[j])
              (j == i ? val : tr).push_back(train[local]);
          try {
            Instance inst = subset_instance(x, data.labels, tr);
            const std::uint64_t seed = derive_seed(
                derive_seed(cfg.seed, 100 + std::uint64_t(f),
                            std::uint64_t(k)),
                std::uint64_t(c), std::uint64_t(i));
            SolveTrace trace =
                solve(g, inst,
                      classify_solver_config(cfg, cfg.solvers[k], scored[c],
                                             int(tr.size()), seed));
            sum += auc(scores_for(x, val, trace.final_x),
                       labels_for(data.labels, val));
            ++valid;
          } catch (const std::exception&) {
          }
        }
        scored[c].mean_val_auc = valid > 0 ? sum / double(valid) : -1.0;
      }
      Combo best = scored[0];
      for (const auto& c : scored)
        if (combo_better(c, best)) best = c;

      auto push = [&](const char* metric, double value) {
        ReportRow row;
        row.experiment = "classify";
        row.fold = f + 1;
        row.solver = solver_kind_name(cfg.solvers[k]);
        row.metric = metric;
        row.value = value;
        fold_rows[f].push_back(std::move(row));
      };
      try {
        Instance inst = subset_instance(x, data.labels, train);
        const std::uint64_t seed = derive_seed(
            derive_seed(cfg.seed, 200 + std::uint64_t(f), std::uint64_t(k)),
            std::uint64_t(best.s), std::uint64_t(best.bf_index));
        SolverConfig sc = classify_solver_config(cfg, cfg.solvers[k], best,
                                                 int(train.size()), seed);
        SolveTrace trace = solve(g, inst, sc);
        auto scores = scores_for(x, test, trace.final_x);
        auto test_labels = labels_for(data.labels, test);
        std::vector<int> preds(scores.size());
        for (size_t i = 0; i < scores.size(); ++i)
          preds[i] = scores[i] >= 0.0 ? 1 : -1;  // zero scores read positive
        int nnz = 0;
        for (int j = 0; j < p; ++j)
          if (trace.final_x[j] != 0.0) ++nnz;

        const double a = auc(scores, test_labels);
        const double bal = balanced_error(preds, test_labels);
        fold_auc[size_t(f) * nk + k] = a;
        fold_bal[size_t(f) * nk + k] = bal;
        push("auc", a);
        push("balanced_error", bal);
        push("support_size", double(nnz));
        push("selected_s", double(best.s));
        push("selected_lambda", best.lambda);
        push("selected_b", double(sc.block_size));
      } catch (const std::exception&) {
        push("auc", std::numeric_limits<double>::quiet_NaN());
      }
    }
  });

  Report report;
  add_manifest(report, "experiment", "classify");
  add_manifest(report, "folds", std::to_string(cfg.folds));
  add_manifest(report, "tuning_combos", std::to_string(combos.size()));
  for (auto& rows : fold_rows)
    for (auto& row : rows) report.rows.push_back(std::move(row));

  // fold-less aggregate rows: mean and sample stddev over completed folds
  for (int k = 0; k < nk; ++k) {
    auto aggregate = [&](const char* metric, const std::vector<double>& vals) {
      double sum = 0.0;
      int n = 0;
      for (int f = 0; f < cfg.folds; ++f) {
        const double v = vals[size_t(f) * nk + k];
        if (std::isfinite(v)) {
          sum += v;
          ++n;
        }
      }
      ReportRow row;
      row.experiment = "classify";
      row.solver = solver_kind_name(cfg.solvers[k]);
      row.metric = metric;
      if (n > 0) {
        row.value = sum / double(n);
        if (n > 1) {
          double ss = 0.0;
          for (int f = 0; f < cfg.folds; ++f) {
            const double v = vals[size_t(f) * nk + k];
            if (std::isfinite(v)) ss += (v - row.value) * (v - row.value);
          }
          row.stddev = std::sqrt(ss / double(n - 1));
        }
      }
      report.rows.push_back(std::move(row));
    };
    aggregate("auc", fold_auc);
    aggregate("balanced_error", fold_bal);
  }
  return report;
}

}  // namespace gsiht
