#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gsiht/experiments.hpp"
#include "gsiht/io.hpp"

using namespace gsiht;

namespace {

ExperimentSpec tiny_curve_spec(const Graph& g) {
  ExperimentSpec spec;
  spec.kind = SweepKind::recovery_curve;
  spec.graph = &g;
  spec.grid_rows = 4;
  spec.grid_cols = 4;
  spec.s_values = {3};
  spec.m_values = {12, 20};
  spec.trials = 4;
  spec.trim_fraction = 0.0;
  spec.max_epochs = 10;
  spec.solvers = {SolverKind::graph_sto_iht, SolverKind::iht};
  spec.seed = 5;
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("index dispatcher covers every slot in both modes") {
  for (ExecMode mode : {ExecMode::serial, ExecMode::openmp}) {
    std::vector<int> out(64, -1);
    for_each_index(64, mode, [&](int i) { out[i] = i * i; });
    for (int i = 0; i < 64; ++i) CHECK(out[i] == i * i);
  }
  // zero jobs is a no-op
  std::atomic<int> calls{0};
  for_each_index(0, ExecMode::openmp, [&](int) { ++calls; });
  CHECK(calls == 0);
}

TEST_CASE("solver names round-trip") {
  for (SolverKind k : {SolverKind::iht, SolverKind::sto_iht,
                       SolverKind::graph_iht, SolverKind::graph_sto_iht})
    CHECK(solver_kind_from_name(solver_kind_name(k)) == k);
  CHECK_THROWS_AS(solver_kind_from_name("Adam"), std::invalid_argument);
}

TEST_CASE("sweep names round-trip") {
  for (SweepKind k :
       {SweepKind::recovery_curve, SweepKind::block_size,
        SweepKind::learning_rate, SweepKind::noise,
        SweepKind::benchmark_graphs})
    CHECK(sweep_kind_from_name(sweep_kind_name(k)) == k);
  CHECK_THROWS_AS(sweep_kind_from_name("anneal"), std::invalid_argument);
}

TEST_CASE("named solvers map onto projection and batching") {
  SolverConfig c = base_solver_config(SolverKind::iht);
  CHECK(c.projection == ProjectionMode::top_s);
  CHECK(c.batching == Batching::full);
  c = base_solver_config(SolverKind::sto_iht);
  CHECK(c.projection == ProjectionMode::top_s);
  CHECK(c.batching == Batching::stochastic);
  c = base_solver_config(SolverKind::graph_iht);
  CHECK(c.projection == ProjectionMode::graph);
  CHECK(c.batching == Batching::full);
  c = base_solver_config(SolverKind::graph_sto_iht);
  CHECK(c.projection == ProjectionMode::graph);
  CHECK(c.batching == Batching::stochastic);
}

TEST_CASE("report text is sorted with empty cells for unset fields") {
  Report report;
  ReportRow late;
  late.experiment = "demo";
  late.s = 9;
  late.solver = "IHT";
  late.metric = "z_metric";
  late.value = 0.5;
  ReportRow early;
  early.experiment = "demo";
  early.s = 2;
  early.m = 40;
  early.b = 8;
  early.eta = 1.0;
  early.noise = 0.0;
  early.epoch = 3;
  early.solver = "IHT";
  early.metric = "error";
  early.value = 1.0 / 3.0;
  early.stddev = 0.25;
  report.rows = {late, early};  // deliberately unsorted

  std::string text = report_rows_text(report);
  std::istringstream lines(text);
  std::string header, first, second, extra;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, first));
  REQUIRE(std::getline(lines, second));
  CHECK(!std::getline(lines, extra));
  CHECK(header ==
        "experiment,s,m,b,eta,noise,epoch,iter,fold,solver,metric,value,"
        "stddev");
  // the s=2 row sorts ahead of s=9 and shows 12 significant digits
  CHECK(first == "demo,2,40,8,1,0,3,,,IHT,error,0.333333333333,0.25");
  CHECK(second == "demo,9,,,,,,,,IHT,z_metric,0.5,");
}

TEST_CASE("report and manifest files mirror the in-memory report") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "gsiht_exp_test";
  fs::create_directories(dir);

  Report report;
  ReportRow row;
  row.experiment = "demo";
  row.solver = "IHT";
  row.metric = "error";
  row.value = 2.0;
  report.rows.push_back(row);
  add_manifest(report, "experiment", "demo");
  add_manifest(report, "seed", "7");

  std::string csv = (dir / "report.csv").string();
  write_report_csv(csv, report);
  std::ifstream in(csv);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == report_rows_text(report));

  std::string mpath = (dir / "manifest.json").string();
  write_manifest(mpath, report);
  std::ifstream min(mpath);
  std::stringstream mbuf;
  mbuf << min.rdbuf();
  // insertion order preserved
  CHECK(mbuf.str().find("\"experiment\": \"demo\"") != std::string::npos);
  CHECK(mbuf.str().find("\"seed\": \"7\"") != std::string::npos);
  CHECK(mbuf.str().find("experiment") < mbuf.str().find("seed"));
  fs::remove_all(dir);
}

TEST_CASE("tiny recovery curve: schema, determinism, pool equivalence") {
  Graph g = Graph::grid(4, 4);
  ExperimentSpec spec = tiny_curve_spec(g);

  Report a = run_experiment(spec);
  CHECK(a.rows.size() == 4);  // 1 sparsity x 2 m x 2 solvers
  for (const ReportRow& row : a.rows) {
    CHECK(row.experiment == "recovery_curve");
    CHECK(row.metric == "recovery_probability");
    CHECK(row.s == 3);
    CHECK(row.b == 3);  // min(s, m)
    CHECK(row.eta == 1.0);
    CHECK(row.value >= 0.0);
    CHECK(row.value <= 1.0);
  }

  Report b = run_experiment(spec);
  CHECK(report_rows_text(a) == report_rows_text(b));

  ExperimentSpec par = spec;
  par.exec = ExecMode::openmp;
  Report c = run_experiment(par);
  CHECK(report_rows_text(a) == report_rows_text(c));
}

TEST_CASE("more data cannot hurt on a well-posed tiny problem") {
  // m = 20 with s = 3 on 16 features is easy; expect some recovery there
  Graph g = Graph::grid(4, 4);
  ExperimentSpec spec = tiny_curve_spec(g);
  spec.m_values = {20};
  spec.max_epochs = 100;
  spec.solvers = {SolverKind::iht};
  Report r = run_experiment(spec);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].value > 0.0);
}

TEST_CASE("noise scan reports min_m or the -1 sentinel") {
  Graph g = Graph::grid(4, 4);
  ExperimentSpec spec;
  spec.kind = SweepKind::noise;
  spec.graph = &g;
  spec.grid_rows = 4;
  spec.grid_cols = 4;
  spec.s = 3;
  spec.b_values = {3};
  spec.noise_values = {0.0};
  spec.trials = 3;
  spec.trim_fraction = 0.0;
  spec.max_epochs = 30;
  spec.m_min = 6;
  spec.m_step = 6;
  spec.m_max = 24;
  spec.solvers = {SolverKind::graph_sto_iht};
  spec.seed = 9;

  Report a = run_sweep(spec);
  REQUIRE(a.rows.size() == 1);
  CHECK(a.rows[0].metric == "min_m");
  double v = a.rows[0].value;
  bool sentinel = v == -1.0;
  bool on_grid = v == 6.0 || v == 12.0 || v == 18.0 || v == 24.0;
  CHECK((sentinel || on_grid));

  Report b = run_sweep(spec);
  CHECK(report_rows_text(a) == report_rows_text(b));
}

TEST_CASE("experiment validation rejects bad setups") {
  Graph g = Graph::grid(4, 4);
  ExperimentSpec spec = tiny_curve_spec(g);

  ExperimentSpec bad = spec;
  bad.graph = nullptr;
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
  bad = spec;
  bad.trials = 0;
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
  bad = spec;
  bad.trim_fraction = 0.5;
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
  bad = spec;
  bad.solvers.clear();
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
  bad = spec;
  bad.s_values.clear();
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
  bad = spec;
  bad.max_epochs = 0;
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);

  // curve kinds cannot be fed to run_sweep
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}

TEST_SUITE_END();
