// command line front end: synthetic recovery experiments, parameter sweeps,
// cross-validated classification, and direct access to the projection / pcst
// primitives. See README for the config-file schema (key = value lines whose
// keys mirror the long option names; explicit flags win).

#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gsiht/classify.hpp"
#include "gsiht/experiments.hpp"
#include "gsiht/io.hpp"
#include "gsiht/pcst.hpp"
#include "gsiht/projection.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace gsiht;

// ---- typed parsing for config-file values ----------------------------------

long long parse_ll(const std::string& key, const std::string& v) {
  size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw std::runtime_error("config key '" + key + "': expected an integer, "
                             "got '" + v + "'");
  return out;
}

double parse_d(const std::string& key, const std::string& v) {
  size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw std::runtime_error("config key '" + key + "': expected a number, "
                             "got '" + v + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, ',')) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return parts;
}

// Config files fill in whatever the command line left at its default.
class ConfigDefaults {
 public:
  explicit ConfigDefaults(const std::string& path) {
    if (!path.empty()) map_ = parse_config_file(path);
  }

  void apply_int(const CLI::Option* opt, const std::string& key, int& var) {
    if (const std::string* v = find(opt, key))
      var = static_cast<int>(parse_ll(key, *v));
  }
  void apply_u64(const CLI::Option* opt, const std::string& key,
                 std::uint64_t& var) {
    if (const std::string* v = find(opt, key))
      var = static_cast<std::uint64_t>(parse_ll(key, *v));
  }
  void apply_double(const CLI::Option* opt, const std::string& key,
                    double& var) {
    if (const std::string* v = find(opt, key)) var = parse_d(key, *v);
  }
  void apply_string(const CLI::Option* opt, const std::string& key,
                    std::string& var) {
    if (const std::string* v = find(opt, key)) var = *v;
  }
  void apply_ints(const CLI::Option* opt, const std::string& key,
                  std::vector<int>& var) {
    if (const std::string* v = find(opt, key)) {
      var.clear();
      for (const auto& part : split_list(*v))
        var.push_back(static_cast<int>(parse_ll(key, part)));
    }
  }
  void apply_doubles(const CLI::Option* opt, const std::string& key,
                     std::vector<double>& var) {
    if (const std::string* v = find(opt, key)) {
      var.clear();
      for (const auto& part : split_list(*v)) var.push_back(parse_d(key, part));
    }
  }
  void apply_strings(const CLI::Option* opt, const std::string& key,
                     std::vector<std::string>& var) {
    if (const std::string* v = find(opt, key)) var = split_list(*v);
  }

  // unknown keys are almost always typos; refuse them
  void finish() const {
    for (const auto& [key, value] : map_) {
      (void)value;
      if (!used_.count(key))
        throw std::runtime_error("config key '" + key +
                                 "' is not an option of this subcommand");
    }
  }

 private:
  const std::string* find(const CLI::Option* opt, const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    used_.insert(key);
    return opt->count() == 0 ? &it->second : nullptr;  // flags override
  }
  std::map<std::string, std::string> map_;
  std::set<std::string> used_;
};

// ---- shared experiment options ---------------------------------------------

struct GraphOpts {
  std::string graph_file;
  int rows = 16, cols = 16;
  int walk_start = -1;
  CLI::Option *graph_opt = nullptr, *rows_opt = nullptr, *cols_opt = nullptr,
              *walk_opt = nullptr;

  void add(CLI::App* cmd) {
    graph_opt = cmd->add_option("--graph", graph_file,
                                "graph file (default: rows x cols grid)");
    rows_opt = cmd->add_option("--rows", rows, "grid rows");
    cols_opt = cmd->add_option("--cols", cols, "grid cols");
    walk_opt = cmd->add_option("--walk-start", walk_start,
                               "support walk start node (-1 = grid center)");
  }
  void apply(ConfigDefaults& cfg) {
    cfg.apply_string(graph_opt, "graph", graph_file);
    cfg.apply_int(rows_opt, "rows", rows);
    cfg.apply_int(cols_opt, "cols", cols);
    cfg.apply_int(walk_opt, "walk-start", walk_start);
  }
  Graph build() const {
    if (!graph_file.empty()) return Graph::load(graph_file);
    return Graph::grid(rows, cols);
  }
};

ExecMode parse_pool(const std::string& name) {
  if (name == "serial") return ExecMode::serial;
  if (name == "openmp") return ExecMode::openmp;
  throw std::runtime_error("pool must be 'serial' or 'openmp', got '" + name +
                           "'");
}

std::vector<SolverKind> parse_solvers(const std::vector<std::string>& names) {
  std::vector<SolverKind> kinds;
  for (const auto& n : names) kinds.push_back(solver_kind_from_name(n));
  return kinds;
}

std::string iso_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream out;
  for (size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream out;
  for (size_t i = 0; i < v.size(); ++i)
    out << (i ? "," : "") << format_sig(v[i]);
  return out.str();
}

// canonical description of every knob that shapes the rows; hashed into the
// manifest so reruns can be matched to their configuration
std::string spec_digest(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "kind=" << sweep_kind_name(spec.kind) << ";rows=" << spec.grid_rows
      << ";cols=" << spec.grid_cols << ";walk=" << spec.walk_start
      << ";s_values=" << join_ints(spec.s_values)
      << ";m_values=" << join_ints(spec.m_values)
      << ";b_values=" << join_ints(spec.b_values)
      << ";eta_values=" << join_doubles(spec.eta_values)
      << ";noise_values=" << join_doubles(spec.noise_values)
      << ";s=" << spec.s << ";m=" << spec.m << ";b=" << spec.b
      << ";eta=" << format_sig(spec.eta)
      << ";noise=" << format_sig(spec.noise_norm) << ";trials=" << spec.trials
      << ";trim=" << format_sig(spec.trim_fraction)
      << ";threshold=" << format_sig(spec.success_threshold)
      << ";max_epochs=" << spec.max_epochs
      << ";residual_tol=" << format_sig(spec.residual_tol)
      << ";m_min=" << spec.m_min << ";m_step=" << spec.m_step
      << ";m_max=" << spec.m_max << ";report_epochs=" << spec.report_epochs
      << ";report_iters=" << spec.report_iters
      << ";validation_m=" << spec.validation_m
      << ";validation_trials=" << spec.validation_trials << ";solvers=";
  for (size_t i = 0; i < spec.solvers.size(); ++i)
    out << (i ? "," : "") << solver_kind_name(spec.solvers[i]);
  out << ";seed=" << spec.seed;
  return out.str();
}

void finish_report(Report& report, const ExperimentSpec& spec,
                   double wall_seconds, const std::string& out_path,
                   const std::string& manifest_path) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(spec_digest(spec))));
  add_manifest(report, "seed", std::to_string(spec.seed));
  add_manifest(report, "config_hash", hash);
  add_manifest(report, "wall_time_seconds", format_sig(wall_seconds));
  int threads = 1;
#ifdef _OPENMP
  if (spec.exec == ExecMode::openmp) threads = omp_get_max_threads();
#endif
  add_manifest(report, "threads", std::to_string(threads));
  add_manifest(report, "generated_at", iso_utc_now());
  write_report_csv(out_path, report);
  write_manifest(manifest_path, report);
  std::printf("wrote %zu rows to %s (manifest: %s)\n", report.rows.size(),
              out_path.c_str(), manifest_path.c_str());
}

// ---- subcommands ------------------------------------------------------------

struct RecoverCmd {
  std::string config_file;
  GraphOpts graph;
  std::string support_file;
  ExperimentSpec spec;
  std::vector<std::string> solver_names{"IHT", "StoIHT", "GraphIHT",
                                        "GraphStoIHT"};
  std::string pool = "serial";
  std::string out = "report.csv";
  std::string manifest_out = "manifest.json";

  CLI::App* cmd = nullptr;
  CLI::Option *o_support, *o_sv, *o_mv, *o_mmin, *o_mstep, *o_mmax, *o_trials,
      *o_trim, *o_eta, *o_noise, *o_thresh, *o_epochs, *o_rtol, *o_solvers,
      *o_vm, *o_vt, *o_bv, *o_ev, *o_pool, *o_seed, *o_out, *o_man;

  void add(CLI::App& app) {
    cmd = app.add_subcommand("recover",
                             "probability-of-recovery curves over (s, m)");
    cmd->add_option("--config", config_file, "key = value defaults file");
    graph.add(cmd);
    o_support = cmd->add_option("--support", support_file,
                                "fixed true-support file (benchmark mode)");
    o_sv = cmd->add_option("--s-values", spec.s_values, "sparsity grid")
               ->delimiter(',');
    o_mv = cmd->add_option("--m-values", spec.m_values,
                           "observation grid (default m-min..m-max)")
               ->delimiter(',');
    o_mmin = cmd->add_option("--m-min", spec.m_min, "first m");
    o_mstep = cmd->add_option("--m-step", spec.m_step, "m stride");
    o_mmax = cmd->add_option("--m-max", spec.m_max, "last m");
    o_trials = cmd->add_option("--trials", spec.trials, "trials per point");
    o_trim = cmd->add_option("--trim", spec.trim_fraction,
                             "trim fraction per side");
    o_eta = cmd->add_option("--eta", spec.eta, "learning rate");
    o_noise = cmd->add_option("--noise", spec.noise_norm, "noise norm");
    o_thresh = cmd->add_option("--threshold", spec.success_threshold,
                               "noiseless success threshold");
    o_epochs = cmd->add_option("--max-epochs", spec.max_epochs, "epoch cap");
    o_rtol = cmd->add_option("--residual-tol", spec.residual_tol,
                             "residual stopping tolerance");
    o_solvers = cmd->add_option("--solvers", solver_names, "solver list")
                    ->delimiter(',');
    o_vm = cmd->add_option("--validation-m", spec.validation_m,
                           "tune (b, eta) on side instances of this size");
    o_vt = cmd->add_option("--validation-trials", spec.validation_trials,
                           "tuning trials");
    o_bv = cmd->add_option("--b-values", spec.b_values,
                           "tuning grid for b (validation mode)")
               ->delimiter(',');
    o_ev = cmd->add_option("--eta-values", spec.eta_values,
                           "tuning grid for eta (validation mode)")
               ->delimiter(',');
    o_pool = cmd->add_option("--pool", pool, "serial | openmp");
    o_seed = cmd->add_option("--seed", spec.seed, "master seed");
    o_out = cmd->add_option("--out", out, "report CSV path");
    o_man = cmd->add_option("--manifest-out", manifest_out, "manifest path");
  }

  void run() {
    ConfigDefaults cfg(config_file);
    graph.apply(cfg);
    cfg.apply_string(o_support, "support", support_file);
    cfg.apply_ints(o_sv, "s-values", spec.s_values);
    cfg.apply_ints(o_mv, "m-values", spec.m_values);
    cfg.apply_int(o_mmin, "m-min", spec.m_min);
    cfg.apply_int(o_mstep, "m-step", spec.m_step);
    cfg.apply_int(o_mmax, "m-max", spec.m_max);
    cfg.apply_int(o_trials, "trials", spec.trials);
    cfg.apply_double(o_trim, "trim", spec.trim_fraction);
    cfg.apply_double(o_eta, "eta", spec.eta);
    cfg.apply_double(o_noise, "noise", spec.noise_norm);
    cfg.apply_double(o_thresh, "threshold", spec.success_threshold);
    cfg.apply_int(o_epochs, "max-epochs", spec.max_epochs);
    cfg.apply_double(o_rtol, "residual-tol", spec.residual_tol);
    std::vector<std::string> names = solver_names;
    cfg.apply_strings(o_solvers, "solvers", names);
    cfg.apply_int(o_vm, "validation-m", spec.validation_m);
    cfg.apply_int(o_vt, "validation-trials", spec.validation_trials);
    cfg.apply_ints(o_bv, "b-values", spec.b_values);
    cfg.apply_doubles(o_ev, "eta-values", spec.eta_values);
    cfg.apply_string(o_pool, "pool", pool);
    cfg.apply_u64(o_seed, "seed", spec.seed);
    cfg.apply_string(o_out, "out", out);
    cfg.apply_string(o_man, "manifest-out", manifest_out);
    cfg.finish();

    Graph g = graph.build();
    Support fixed;
    spec.kind = SweepKind::recovery_curve;
    if (!support_file.empty()) {
      fixed = load_support(support_file);
      spec.fixed_support = &fixed;
      spec.kind = SweepKind::benchmark_graphs;
    }
    spec.graph = &g;
    spec.grid_rows = graph.rows;
    spec.grid_cols = graph.cols;
    spec.walk_start = graph.walk_start;
    spec.solvers = parse_solvers(names);
    spec.exec = parse_pool(pool);

    const auto t0 = std::chrono::steady_clock::now();
    Report report = run_experiment(spec);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    finish_report(report, spec, secs, out, manifest_out);
  }
};

struct SweepCmd {
  std::string config_file;
  GraphOpts graph;
  std::string kind_name;
  ExperimentSpec spec;
  std::vector<std::string> solver_names{"GraphStoIHT"};
  std::string pool = "serial";
  std::string out = "report.csv";
  std::string manifest_out = "manifest.json";

  CLI::App* cmd = nullptr;
  CLI::Option *o_kind, *o_s, *o_m, *o_b, *o_bv, *o_ev, *o_nv, *o_eta,
      *o_trials, *o_trim, *o_thresh, *o_epochs, *o_rtol, *o_mmin, *o_mstep,
      *o_mmax, *o_repe, *o_repi, *o_solvers, *o_pool, *o_seed, *o_out, *o_man;

  void add(CLI::App& app) {
    cmd = app.add_subcommand(
        "sweep", "block_size / learning_rate / noise parameter sweeps");
    cmd->add_option("--config", config_file, "key = value defaults file");
    o_kind = cmd->add_option("--kind", kind_name,
                             "block_size | learning_rate | noise")
                 ->required();
    graph.add(cmd);
    o_s = cmd->add_option("--s", spec.s, "sparsity");
    o_m = cmd->add_option("--m", spec.m,
                          "observations (learning_rate default: 80)");
    o_b = cmd->add_option("--b", spec.b, "block size (learning_rate sweep)");
    o_bv = cmd->add_option("--b-values", spec.b_values, "block-size grid")
               ->delimiter(',');
    o_ev = cmd->add_option("--eta-values", spec.eta_values,
                           "learning-rate grid (default 0.1..1.6)")
               ->delimiter(',');
    o_nv = cmd->add_option("--noise-values", spec.noise_values, "noise norms")
               ->delimiter(',');
    o_eta = cmd->add_option("--eta", spec.eta, "fixed learning rate");
    o_trials = cmd->add_option("--trials", spec.trials, "trials");
    o_trim = cmd->add_option("--trim", spec.trim_fraction,
                             "trim fraction per side");
    o_thresh = cmd->add_option("--threshold", spec.success_threshold,
                               "noiseless success threshold");
    o_epochs = cmd->add_option("--max-epochs", spec.max_epochs, "epoch cap");
    o_rtol = cmd->add_option("--residual-tol", spec.residual_tol,
                             "residual stopping tolerance");
    o_mmin = cmd->add_option("--m-min", spec.m_min, "noise scan: first m");
    o_mstep = cmd->add_option("--m-step", spec.m_step, "noise scan: stride");
    o_mmax = cmd->add_option("--m-max", spec.m_max, "noise scan: last m");
    o_repe = cmd->add_option("--report-epochs", spec.report_epochs,
                             "cap reported epochs (0 = all)");
    o_repi = cmd->add_option("--report-iters", spec.report_iters,
                             "cap reported iterations (0 = all)");
    o_solvers = cmd->add_option("--solvers", solver_names, "solver list")
                    ->delimiter(',');
    o_pool = cmd->add_option("--pool", pool, "serial | openmp");
    o_seed = cmd->add_option("--seed", spec.seed, "master seed");
    o_out = cmd->add_option("--out", out, "report CSV path");
    o_man = cmd->add_option("--manifest-out", manifest_out, "manifest path");
  }

  void run() {
    ConfigDefaults cfg(config_file);
    graph.apply(cfg);
    cfg.apply_string(o_kind, "kind", kind_name);
    cfg.apply_int(o_s, "s", spec.s);
    cfg.apply_int(o_m, "m", spec.m);
    cfg.apply_int(o_b, "b", spec.b);
    cfg.apply_ints(o_bv, "b-values", spec.b_values);
    cfg.apply_doubles(o_ev, "eta-values", spec.eta_values);
    cfg.apply_doubles(o_nv, "noise-values", spec.noise_values);
    cfg.apply_double(o_eta, "eta", spec.eta);
    cfg.apply_int(o_trials, "trials", spec.trials);
    cfg.apply_double(o_trim, "trim", spec.trim_fraction);
    cfg.apply_double(o_thresh, "threshold", spec.success_threshold);
    cfg.apply_int(o_epochs, "max-epochs", spec.max_epochs);
    cfg.apply_double(o_rtol, "residual-tol", spec.residual_tol);
    cfg.apply_int(o_mmin, "m-min", spec.m_min);
    cfg.apply_int(o_mstep, "m-step", spec.m_step);
    cfg.apply_int(o_mmax, "m-max", spec.m_max);
    cfg.apply_int(o_repe, "report-epochs", spec.report_epochs);
    cfg.apply_int(o_repi, "report-iters", spec.report_iters);
    std::vector<std::string> names = solver_names;
    cfg.apply_strings(o_solvers, "solvers", names);
    cfg.apply_string(o_pool, "pool", pool);
    cfg.apply_u64(o_seed, "seed", spec.seed);
    cfg.apply_string(o_out, "out", out);
    cfg.apply_string(o_man, "manifest-out", manifest_out);
    cfg.finish();

    spec.kind = sweep_kind_from_name(kind_name);
    if (spec.kind == SweepKind::learning_rate && o_m->count() == 0 &&
        spec.m == 180)
      spec.m = 80;  // the learning-rate study runs leaner by default
    if (spec.kind == SweepKind::noise && o_bv->count() == 0 &&
        spec.b_values.size() == 12)
      spec.b_values = {2, 4, 8, 16, 32, 64};

    Graph g = graph.build();
    spec.graph = &g;
    spec.grid_rows = graph.rows;
    spec.grid_cols = graph.cols;
    spec.walk_start = graph.walk_start;
    spec.solvers = parse_solvers(names);
    spec.exec = parse_pool(pool);

    const auto t0 = std::chrono::steady_clock::now();
    Report report = run_sweep(spec);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    finish_report(report, spec, secs, out, manifest_out);
  }
};

struct ClassifyCmd {
  std::string config_file;
  std::string data_file;
  std::string graph_file;
  ClassifyConfig conf;
  std::vector<std::string> solver_names{"GraphStoIHT"};
  std::string pool = "serial";
  std::string out = "report.csv";
  std::string manifest_out = "manifest.json";

  CLI::App* cmd = nullptr;
  CLI::Option *o_data, *o_graph, *o_folds, *o_sg, *o_lg, *o_bf, *o_iters,
      *o_g, *o_solvers, *o_pool, *o_seed, *o_out, *o_man;

  void add(CLI::App& app) {
    cmd = app.add_subcommand("classify",
                             "cross-validated sparse logistic regression");
    cmd->add_option("--config", config_file, "key = value defaults file");
    o_data = cmd->add_option("--data", data_file,
                             "CSV dataset with a 'label' column")
                 ->required();
    o_graph = cmd->add_option("--graph", graph_file,
                              "feature graph (required for graph solvers)");
    o_folds = cmd->add_option("--folds", conf.folds, "cross-validation folds");
    o_sg = cmd->add_option("--s-grid", conf.s_grid,
                           "sparsity grid (default 10,15,...,100)")
               ->delimiter(',');
    o_lg = cmd->add_option("--lambda-grid", conf.lambda_grid,
                           "ridge weights")
               ->delimiter(',');
    o_bf = cmd->add_option("--b-fractions", conf.b_fractions,
                           "block sizes as fractions of the training set")
               ->delimiter(',');
    o_iters = cmd->add_option("--max-iters", conf.max_iters,
                              "total solver iterations");
    o_g = cmd->add_option("--g", conf.g, "connected components");
    o_solvers = cmd->add_option("--solvers", solver_names, "solver list")
                    ->delimiter(',');
    o_pool = cmd->add_option("--pool", pool, "serial | openmp");
    o_seed = cmd->add_option("--seed", conf.seed, "master seed");
    o_out = cmd->add_option("--out", out, "report CSV path");
    o_man = cmd->add_option("--manifest-out", manifest_out, "manifest path");
  }

  void run() {
    ConfigDefaults cfg(config_file);
    cfg.apply_string(o_data, "data", data_file);
    cfg.apply_string(o_graph, "graph", graph_file);
    cfg.apply_int(o_folds, "folds", conf.folds);
    cfg.apply_ints(o_sg, "s-grid", conf.s_grid);
    cfg.apply_doubles(o_lg, "lambda-grid", conf.lambda_grid);
    cfg.apply_doubles(o_bf, "b-fractions", conf.b_fractions);
    cfg.apply_int(o_iters, "max-iters", conf.max_iters);
    cfg.apply_int(o_g, "g", conf.g);
    std::vector<std::string> names = solver_names;
    cfg.apply_strings(o_solvers, "solvers", names);
    cfg.apply_string(o_pool, "pool", pool);
    cfg.apply_u64(o_seed, "seed", conf.seed);
    cfg.apply_string(o_out, "out", out);
    cfg.apply_string(o_man, "manifest-out", manifest_out);
    cfg.finish();

    conf.solvers = parse_solvers(names);
    conf.exec = parse_pool(pool);
    Dataset data = load_dataset_csv(data_file);
    const int p = int(data.x.cols());

    bool needs_graph = false;
    for (SolverKind k : conf.solvers)
      if (base_solver_config(k).projection == ProjectionMode::graph)
        needs_graph = true;
    Graph g(1, {});
    if (!graph_file.empty()) {
      g = Graph::load(graph_file);
    } else if (needs_graph) {
      throw std::runtime_error(
          "graph solvers need --graph over the feature indices");
    } else {
      g = Graph(p, {});  // top_s solvers never look at edges
    }

    const auto t0 = std::chrono::steady_clock::now();
    Report report = run_classification(g, data, conf);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    std::ostringstream digest;
    digest << "classify;data=" << data_file << ";graph=" << graph_file
           << ";folds=" << conf.folds << ";s_grid=" << join_ints(conf.s_grid)
           << ";lambda_grid=" << join_doubles(conf.lambda_grid)
           << ";b_fractions=" << join_doubles(conf.b_fractions)
           << ";max_iters=" << conf.max_iters << ";g=" << conf.g
           << ";solvers=";
    for (size_t i = 0; i < conf.solvers.size(); ++i)
      digest << (i ? "," : "") << solver_kind_name(conf.solvers[i]);
    digest << ";seed=" << conf.seed;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(digest.str())));
    add_manifest(report, "seed", std::to_string(conf.seed));
    add_manifest(report, "config_hash", hash);
    add_manifest(report, "wall_time_seconds", format_sig(secs));
    int threads = 1;
#ifdef _OPENMP
    if (conf.exec == ExecMode::openmp) threads = omp_get_max_threads();
#endif
    add_manifest(report, "threads", std::to_string(threads));
    add_manifest(report, "generated_at", iso_utc_now());
    write_report_csv(out, report);
    write_manifest(manifest_out, report);
    std::printf("wrote %zu rows to %s (manifest: %s)\n", report.rows.size(),
                out.c_str(), manifest_out.c_str());
  }
};

struct ProjectCmd {
  std::string config_file;
  GraphOpts graph;
  std::string kind = "tail";
  std::string vector_file;
  int s = 0, g_components = 1;
  double budget = std::numeric_limits<double>::infinity();
  double omega = 0.1;
  int max_iters = 50;
  std::string out;

  CLI::App* cmd = nullptr;
  CLI::Option *o_kind, *o_vec, *o_s, *o_g, *o_budget, *o_omega, *o_iters,
      *o_out;

  void add(CLI::App& app) {
    cmd = app.add_subcommand("project",
                             "run one head or tail projection on a vector");
    cmd->add_option("--config", config_file, "key = value defaults file");
    graph.add(cmd);
    o_kind = cmd->add_option("--kind", kind, "head | tail");
    o_vec = cmd->add_option("--vector", vector_file, "input vector file")
                ->required();
    o_s = cmd->add_option("--s", s, "target sparsity")->required();
    o_g = cmd->add_option("--g", g_components, "connected components");
    o_budget = cmd->add_option("--budget", budget, "weight budget");
    o_omega = cmd->add_option("--omega", omega, "sparsity slack factor");
    o_iters = cmd->add_option("--max-iters", max_iters,
                              "binary search iterations");
    o_out = cmd->add_option("--out", out, "write projected vector here");
  }

  void run() {
    ConfigDefaults cfg(config_file);
    graph.apply(cfg);
    cfg.apply_string(o_kind, "kind", kind);
    cfg.apply_string(o_vec, "vector", vector_file);
    cfg.apply_int(o_s, "s", s);
    cfg.apply_int(o_g, "g", g_components);
    cfg.apply_double(o_budget, "budget", budget);
    cfg.apply_double(o_omega, "omega", omega);
    cfg.apply_int(o_iters, "max-iters", max_iters);
    cfg.apply_string(o_out, "out", out);
    cfg.finish();

    Graph g = graph.build();
    Eigen::VectorXd x = load_vector(vector_file);
    if (x.size() != g.num_nodes())
      throw std::runtime_error("vector length does not match graph size");
    WgmParams wgm{s, g_components, budget};
    ProjectionResult result;
    if (kind == "head") {
      auto conf = ProjectionConfig::head(g.num_nodes(), wgm, omega);
      conf.max_binary_iters = max_iters;
      result = head_projection(g, x, conf);
    } else if (kind == "tail") {
      auto conf = ProjectionConfig::tail(wgm, omega);
      conf.max_binary_iters = max_iters;
      result = tail_projection(g, x, conf);
    } else {
      throw std::runtime_error("kind must be 'head' or 'tail'");
    }
    std::printf("support_size %d\n", result.achieved_sparsity);
    std::printf("pcst_calls %d\n", result.iterations_used);
    std::printf("captured_energy %s\n",
                format_sig(result.captured_energy).c_str());
    std::printf("residual_energy %s\n",
                format_sig(result.residual_energy).c_str());
    std::printf("support");
    for (int v : result.support) std::printf(" %d", v);
    std::printf("\n");
    if (!out.empty()) save_vector(out, result.vector);
  }
};

struct PcstCmd {
  std::string config_file;
  GraphOpts graph;
  std::string prizes_file;
  double cost_scale = 1.0;
  int target_components = 1;

  CLI::App* cmd = nullptr;
  CLI::Option *o_prizes, *o_scale, *o_g;

  void add(CLI::App& app) {
    cmd = app.add_subcommand("pcst",
                             "solve one prize-collecting Steiner instance");
    cmd->add_option("--config", config_file, "key = value defaults file");
    graph.add(cmd);
    o_prizes = cmd->add_option("--prizes", prizes_file, "prize vector file")
                   ->required();
    o_scale = cmd->add_option("--cost-scale", cost_scale,
                              "edge cost multiplier");
    o_g = cmd->add_option("--target-components", target_components,
                          "stop when this many active clusters remain");
  }

  void run() {
    ConfigDefaults cfg(config_file);
    graph.apply(cfg);
    cfg.apply_string(o_prizes, "prizes", prizes_file);
    cfg.apply_double(o_scale, "cost-scale", cost_scale);
    cfg.apply_int(o_g, "target-components", target_components);
    cfg.finish();

    Graph g = graph.build();
    Eigen::VectorXd prizes = load_vector(prizes_file);
    if (prizes.size() != g.num_nodes())
      throw std::runtime_error("prize length does not match graph size");
    PcstInstance inst;
    inst.prizes.assign(prizes.data(), prizes.data() + prizes.size());
    inst.cost_scale = cost_scale;
    inst.target_components = target_components;
    PcstForest forest = solve_pcst(g, inst);
    std::printf("objective %s\n", format_sig(forest.objective).c_str());
    std::printf("nodes");
    for (int v : forest.nodes) std::printf(" %d", v);
    std::printf("\nedges");
    for (int e : forest.edges)
      std::printf(" %d-%d", g.edges()[e].u, g.edges()[e].v);
    std::printf("\n");
  }
};

struct GenCmd {
  std::string config_file;
  GraphOpts graph;
  std::string support_file;
  int s = 0, m = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir;

  CLI::App* cmd = nullptr;
  CLI::Option *o_support, *o_s, *o_m, *o_noise, *o_seed, *o_out;

  void add(CLI::App& app) {
    cmd = app.add_subcommand("gen", "emit one synthetic instance directory");
    cmd->add_option("--config", config_file, "key = value defaults file");
    graph.add(cmd);
    o_support = cmd->add_option("--support", support_file,
                                "fixed support file (skips the walk)");
    o_s = cmd->add_option("--s", s, "support size")->required();
    o_m = cmd->add_option("--m", m, "observations")->required();
    o_noise = cmd->add_option("--noise", noise, "noise norm");
    o_seed = cmd->add_option("--seed", seed, "seed");
    o_out = cmd->add_option("--out", out_dir, "output directory")->required();
  }

  void run() {
    ConfigDefaults cfg(config_file);
    graph.apply(cfg);
    cfg.apply_string(o_support, "support", support_file);
    cfg.apply_int(o_s, "s", s);
    cfg.apply_int(o_m, "m", m);
    cfg.apply_double(o_noise, "noise", noise);
    cfg.apply_u64(o_seed, "seed", seed);
    cfg.apply_string(o_out, "out", out_dir);
    cfg.finish();

    Graph g = graph.build();
    SynthSpec spec;
    spec.graph = &g;
    spec.walk_start = graph.walk_start;
    spec.grid_rows = graph.rows;
    spec.grid_cols = graph.cols;
    spec.s = s;
    spec.m = m;
    spec.noise_norm = noise;
    spec.seed = seed;
    Support fixed;
    if (!support_file.empty()) {
      fixed = load_support(support_file);
      spec.fixed_support = &fixed;
    }
    SynthInstance si = synth_instance(spec);
    save_instance_dir(out_dir, si, noise, seed);
    std::printf("wrote instance (m=%d, p=%d, s=%zu) to %s\n", m,
                g.num_nodes(), si.support.size(), out_dir.c_str());
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-structured sparse recovery toolkit"};
  app.require_subcommand(1);

  RecoverCmd recover;
  SweepCmd sweep;
  ClassifyCmd classify;
  ProjectCmd project;
  PcstCmd pcst;
  GenCmd gen;
  recover.add(app);
  sweep.add(app);
  classify.add(app);
  project.add(app);
  pcst.add(app);
  gen.add(app);

  CLI11_PARSE(app, argc, argv);

  try {
    if (recover.cmd->parsed()) recover.run();
    if (sweep.cmd->parsed()) sweep.run();
    if (classify.cmd->parsed()) classify.run();
    if (project.cmd->parsed()) project.run();
    if (pcst.cmd->parsed()) pcst.run();
    if (gen.cmd->parsed()) gen.run();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
