#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gsiht/solver.hpp"
#include "gsiht/synth.hpp"

namespace gsiht {

enum class ExecMode { serial, openmp };

// Dispatches fn(0..count-1) either inline or across an OpenMP pool. fn must
// not throw and must only write to its own slots.
void for_each_index(int count, ExecMode mode,
                    const std::function<void(int)>& fn);

enum class SolverKind { iht, sto_iht, graph_iht, graph_sto_iht };

const char* solver_kind_name(SolverKind k);
SolverKind solver_kind_from_name(const std::string& name);

// projection/batching combination for each named solver; remaining knobs
// (wgm, eta, ...) are filled by the caller
SolverConfig base_solver_config(SolverKind k);

enum class SweepKind {
  recovery_curve,
  block_size,
  learning_rate,
  noise,
  benchmark_graphs
};

SweepKind sweep_kind_from_name(const std::string& name);
const char* sweep_kind_name(SweepKind k);

struct ExperimentSpec {
  SweepKind kind = SweepKind::recovery_curve;
  const Graph* graph = nullptr;
  int grid_rows = 16, grid_cols = 16;     // used when graph is a grid
  int walk_start = -1;                    // -1 = grid center
  const Support* fixed_support = nullptr;  // benchmark-style fixed truth

  std::vector<int> s_values{8, 20, 28, 36};             // recovery curve
  std::vector<int> m_values;                            // empty = 5..250 by 5
  std::vector<int> b_values{1, 2, 4, 8, 16, 24, 32, 40, 48, 56, 64, 180};
  std::vector<double> eta_values;                       // empty = 0.1..1.6
  std::vector<double> noise_values{0.0, 0.5};

  int s = 8;
  int m = 180;   // block_size default; learning_rate runs typically use 80
  int b = 8;     // learning_rate sweep block size
  double eta = 1.0;
  double noise_norm = 0.0;
  int trials = 50;
  double trim_fraction = 0.05;
  double success_threshold = 1e-6;  // noisy sweeps switch to the noise norm
  int max_epochs = 500;
  double residual_tol = 1e-7;
  int m_min = 5, m_step = 5, m_max = 250;  // noise min-m scan
  int report_epochs = 0, report_iters = 0;  // 0 = everything recorded
  int validation_m = 0;       // > 0: tune (b, eta) on side instances first
  int validation_trials = 10;

  std::vector<SolverKind> solvers{SolverKind::graph_sto_iht};
  ExecMode exec = ExecMode::serial;
  std::uint64_t seed = 0;
};

// One CSV row; negative ints and NaN doubles print as empty cells.
struct ReportRow {
  std::string experiment;
  int s = -1, m = -1, b = -1;
  double eta = std::numeric_limits<double>::quiet_NaN();
  double noise = std::numeric_limits<double>::quiet_NaN();
  int epoch = -1, iter = -1, fold = -1;
  std::string solver;
  std::string metric;
  double value = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
};

struct Report {
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, std::string>> manifest;
};

void add_manifest(Report& report, const std::string& key,
                  const std::string& value);

// probability-of-recovery per (s, m, solver) with shared per-trial instances
Report run_recovery_curve(const ExperimentSpec& spec);

// block_size / learning_rate / noise sweeps (see README for row schemas)
Report run_sweep(const ExperimentSpec& spec);

// dispatch on spec.kind
Report run_experiment(const ExperimentSpec& spec);

// rows sorted by full key; header + one line per row, 12 significant digits
void write_report_csv(const std::string& path, const Report& report);
std::string report_rows_text(const Report& report);
void write_manifest(const std::string& path, const Report& report);

}  // namespace gsiht
