// Times the serial and OpenMP execution paths of the experiment pool on a
// small recovery sweep and checks that both produce identical report rows.
// Run via `make bench` (or the bench_pool binary directly).

#include <chrono>
#include <cstdio>

#include "gsiht/experiments.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double timed_run(gsiht::ExperimentSpec spec, gsiht::ExecMode mode,
                 std::string& rows_out) {
  spec.exec = mode;
  const auto t0 = std::chrono::steady_clock::now();
  gsiht::Report report = gsiht::run_experiment(spec);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  rows_out = gsiht::report_rows_text(report);
  return secs;
}

}  // namespace

int main() {
  gsiht::Graph g = gsiht::Graph::grid(16, 16);
  gsiht::ExperimentSpec spec;
  spec.kind = gsiht::SweepKind::recovery_curve;
  spec.graph = &g;
  spec.s_values = {8};
  spec.m_values = {40, 60, 80};
  spec.trials = 6;
  spec.max_epochs = 20;
  spec.seed = 7;
  spec.solvers = {gsiht::SolverKind::graph_sto_iht, gsiht::SolverKind::iht};

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("pool benchmark: 1 sparsity x 3 m-values x 6 trials, "
              "%d thread(s) available\n", threads);

  std::string serial_rows, pool_rows;
  const double serial_secs =
      timed_run(spec, gsiht::ExecMode::serial, serial_rows);
  std::printf("serial: %.2f s\n", serial_secs);
  const double pool_secs = timed_run(spec, gsiht::ExecMode::openmp, pool_rows);
  std::printf("openmp: %.2f s (speedup %.2fx)\n", pool_secs,
              serial_secs / pool_secs);

  if (serial_rows != pool_rows) {
    std::printf("FAIL: serial and openmp report rows differ\n");
    return 1;
  }
  std::printf("OK: identical report rows\n");
  return 0;
}
