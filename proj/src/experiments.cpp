#include "gsiht/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gsiht/io.hpp"
#include "gsiht/metrics.hpp"
#include "json.hpp"

namespace gsiht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isfinite(v) ? v : kInf; }

std::vector<int> resolve_m_grid(const ExperimentSpec& spec) {
  if (!spec.m_values.empty()) return spec.m_values;
  std::vector<int> grid;
  for (int m = spec.m_min; m <= spec.m_max; m += spec.m_step)
    grid.push_back(m);
  return grid;
}

std::vector<double> resolve_eta_grid(const ExperimentSpec& spec) {
  if (!spec.eta_values.empty()) return spec.eta_values;
  std::vector<double> grid;
  for (int k = 1; k <= 16; ++k) grid.push_back(k / 10.0);
  return grid;
}

void validate_common(const ExperimentSpec& spec) {
  if (!spec.graph)
    throw std::invalid_argument("experiment: graph not set");
  if (spec.trials < 1)
    throw std::invalid_argument("experiment: trials must be >= 1");
  if (!(spec.trim_fraction >= 0.0 && spec.trim_fraction < 0.5))
    throw std::invalid_argument(
        "experiment: trim_fraction must be in [0, 0.5)");
  if (spec.solvers.empty())
    throw std::invalid_argument("experiment: no solvers selected");
  if (spec.max_epochs < 1)
    throw std::invalid_argument("experiment: max_epochs must be >= 1");
}

std::uint64_t point_tag(int s, int m, int extra = 0) {
  return (std::uint64_t(extra) << 40) | (std::uint64_t(s) << 20) |
         std::uint64_t(m);
}

SynthSpec make_synth_spec(const ExperimentSpec& spec, int s, int m,
                          double noise, std::uint64_t tag, int trial) {
  SynthSpec out;
  out.graph = spec.graph;
  out.walk_start = spec.walk_start;
  out.grid_rows = spec.grid_rows;
  out.grid_cols = spec.grid_cols;
  out.s = s;
  out.m = m;
  out.noise_norm = noise;
  out.seed = derive_seed(spec.seed, tag, std::uint64_t(trial));
  out.fixed_support = spec.fixed_support;
  return out;
}

SolverConfig make_solver_config(const ExperimentSpec& spec, SolverKind kind,
                                int solver_idx, std::uint64_t instance_seed,
                                int s, int b, double eta) {
  SolverConfig cfg = base_solver_config(kind);
  cfg.loss = LossKind::lsq;
  cfg.wgm = WgmParams{s, 1, std::numeric_limits<double>::infinity()};
  cfg.block_size = b;
  cfg.eta = eta;
  cfg.max_epochs = spec.max_epochs;
  cfg.residual_tol = spec.residual_tol;
  // sub-streams 1..4 of the instance seed belong to data generation
  cfg.seed = derive_seed(instance_seed, 11 + std::uint64_t(solver_idx));
  return cfg;
}

double final_error(const Graph& g, const SynthInstance& si,
                   const SolverConfig& cfg) {
  try {
    SolveTrace trace = solve(g, si.inst, cfg, &si.x_true);
    return sanitize((trace.final_x - si.x_true).norm());
  } catch (const std::exception&) {
    return kInf;  // diverged or infeasible; counts as a failed trial
  }
}

std::vector<double> error_curve(const Graph& g, const SynthInstance& si,
                                const SolverConfig& cfg, bool per_iter) {
  try {
    SolveTrace trace = solve(g, si.inst, cfg, &si.x_true);
    auto curve = per_iter ? trace.iter_errors : trace.epoch_errors;
    for (double& v : curve) v = sanitize(v);
    return curve;
  } catch (const std::exception&) {
    return {};  // empty curve reads as +inf everywhere
  }
}

double curve_at(const std::vector<double>& curve, size_t i) {
  if (curve.empty()) return kInf;
  return i < curve.size() ? curve[i] : curve.back();  // carry the final value
}

struct MeanSd {
  double mean = 0.0, sd = 0.0;
};

MeanSd trimmed_mean_sd(const std::vector<double>& values, double trim) {
  auto kept = trimmed_trials(values, trim);
  MeanSd out;
  for (double v : kept) out.mean += v;
  out.mean /= double(kept.size());
  if (kept.size() > 1) {
    double ss = 0.0;
    for (double v : kept) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / double(kept.size() - 1));
  }
  return out;
}

double success_threshold_for(const ExperimentSpec& spec, double noise) {
  return noise == 0.0 ? spec.success_threshold : noise;
}

size_t count_failed(const std::vector<double>& errors) {
  size_t n = 0;
  for (double e : errors)
    if (!std::isfinite(e)) ++n;
  return n;
}

struct ValidationChoice {
  int b = -1;
  double eta = 1.0;
  double mean_error = kInf;
};

ValidationChoice tune_validation(const ExperimentSpec& spec, int s,
                                 SolverKind kind, int solver_idx) {
  const auto eta_grid = resolve_eta_grid(spec);
  ValidationChoice best;
  for (int b : spec.b_values) {
    for (double eta : eta_grid) {
      double sum = 0.0;
      for (int trial = 0; trial < spec.validation_trials; ++trial) {
        // tag bit 50 keeps tuning instances off the curve's seed stream
        const std::uint64_t tag =
            (std::uint64_t(1) << 50) | point_tag(s, spec.validation_m);
        SynthSpec sspec =
            make_synth_spec(spec, s, spec.validation_m, spec.noise_norm, tag,
                            trial);
        try {
          SynthInstance si = synth_instance(sspec);
          sum += final_error(*spec.graph, si,
                             make_solver_config(spec, kind, solver_idx,
                                                sspec.seed, s, b, eta));
        } catch (const std::exception&) {
          sum += kInf;
        }
      }
      const double mean = sum / double(spec.validation_trials);
      if (mean < best.mean_error) best = ValidationChoice{b, eta, mean};
    }
  }
  return best;
}

}  // namespace

void for_each_index(int count, ExecMode mode,
                    const std::function<void(int)>& fn) {
#ifdef _OPENMP
  if (mode == ExecMode::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
#else
  (void)mode;
#endif
  for (int i = 0; i < count; ++i) fn(i);
}

const char* solver_kind_name(SolverKind k) {
  switch (k) {
    case SolverKind::iht: return "IHT";
    case SolverKind::sto_iht: return "StoIHT";
    case SolverKind::graph_iht: return "GraphIHT";
    case SolverKind::graph_sto_iht: return "GraphStoIHT";
  }
  return "?";
}

SolverKind solver_kind_from_name(const std::string& name) {
  for (SolverKind k : {SolverKind::iht, SolverKind::sto_iht,
                       SolverKind::graph_iht, SolverKind::graph_sto_iht})
    if (name == solver_kind_name(k)) return k;
  throw std::invalid_argument(
      "unknown solver '" + name +
      "' (expected IHT, StoIHT, GraphIHT or GraphStoIHT)");
}

SolverConfig base_solver_config(SolverKind k) {
  SolverConfig cfg;
  switch (k) {
    case SolverKind::iht:
      cfg.projection = ProjectionMode::top_s;
      cfg.batching = Batching::full;
      break;
    case SolverKind::sto_iht:
      cfg.projection = ProjectionMode::top_s;
      cfg.batching = Batching::stochastic;
      break;
    case SolverKind::graph_iht:
      cfg.projection = ProjectionMode::graph;
      cfg.batching = Batching::full;
      break;
    case SolverKind::graph_sto_iht:
      cfg.projection = ProjectionMode::graph;
      cfg.batching = Batching::stochastic;
      break;
  }
  return cfg;
}

const char* sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::recovery_curve: return "recovery_curve";
    case SweepKind::block_size: return "block_size";
    case SweepKind::learning_rate: return "learning_rate";
    case SweepKind::noise: return "noise";
    case SweepKind::benchmark_graphs: return "benchmark_graphs";
  }
  return "?";
}

SweepKind sweep_kind_from_name(const std::string& name) {
  for (SweepKind k :
       {SweepKind::recovery_curve, SweepKind::block_size,
        SweepKind::learning_rate, SweepKind::noise,
        SweepKind::benchmark_graphs})
    if (name == sweep_kind_name(k)) return k;
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

void add_manifest(Report& report, const std::string& key,
                  const std::string& value) {
  report.manifest.emplace_back(key, value);
}

Report run_recovery_curve(const ExperimentSpec& spec) {
  validate_common(spec);
  if (spec.s_values.empty())
    throw std::invalid_argument("recovery curve: empty sparsity grid");
  const auto m_grid = resolve_m_grid(spec);
  if (m_grid.empty())
    throw std::invalid_argument("recovery curve: empty m grid");
  const int ns = int(spec.s_values.size());
  const int nm = int(m_grid.size());
  const int nk = int(spec.solvers.size());

  Report report;
  add_manifest(report, "experiment", sweep_kind_name(spec.kind));

  // optional (b, eta) tuning on side instances, per sparsity and solver
  std::vector<std::vector<ValidationChoice>> choices(
      ns, std::vector<ValidationChoice>(nk));
  if (spec.validation_m > 0) {
    for (int si = 0; si < ns; ++si)
      for (int k = 0; k < nk; ++k) {
        choices[si][k] = tune_validation(spec, spec.s_values[si],
                                         spec.solvers[k], k);
        std::ostringstream note;
        note << "b=" << choices[si][k].b << " eta=" << choices[si][k].eta
             << " mean_error=" << format_sig(choices[si][k].mean_error);
        add_manifest(report,
                     std::string("validation_s") +
                         std::to_string(spec.s_values[si]) + "_" +
                         solver_kind_name(spec.solvers[k]),
                     note.str());
      }
  }

  std::vector<double> errors(size_t(ns) * nm * nk * spec.trials, kInf);
  auto slot = [&](int si, int mi, int k, int trial) -> double& {
    return errors[((size_t(si) * nm + mi) * nk + k) * spec.trials + trial];
  };
  auto point_config = [&](int si, int mi, int k) {
    const int s = spec.s_values[si];
    const int m = m_grid[mi];
    int b = std::min(s, m);
    double eta = spec.eta;
    if (spec.validation_m > 0 && choices[si][k].b > 0) {
      b = choices[si][k].b;
      eta = choices[si][k].eta;
    }
    return std::pair<int, double>(b, eta);
  };

  for_each_index(ns * nm * spec.trials, spec.exec, [&](int job) {
    const int trial = job % spec.trials;
    const int point = job / spec.trials;
    const int mi = point % nm;
    const int si = point / nm;
    const int s = spec.s_values[si];
    const int m = m_grid[mi];
    SynthSpec sspec = make_synth_spec(spec, s, m, spec.noise_norm,
                                      point_tag(s, m), trial);
    SynthInstance si_data;
    try {
      si_data = synth_instance(sspec);
    } catch (const std::exception&) {
      return;  // slots stay +inf
    }
    for (int k = 0; k < nk; ++k) {
      auto [b, eta] = point_config(si, mi, k);
      slot(si, mi, k, trial) =
          final_error(*spec.graph, si_data,
                      make_solver_config(spec, spec.solvers[k], k, sspec.seed,
                                         s, b, eta));
    }
  });

  const double threshold = success_threshold_for(spec, spec.noise_norm);
  size_t failed = 0;
  for (int si = 0; si < ns; ++si)
    for (int mi = 0; mi < nm; ++mi)
      for (int k = 0; k < nk; ++k) {
        std::vector<double> errs(spec.trials);
        for (int t = 0; t < spec.trials; ++t) errs[t] = slot(si, mi, k, t);
        failed += count_failed(errs);
        ReportRow row;
        row.experiment = sweep_kind_name(spec.kind);
        row.s = spec.s_values[si];
        row.m = m_grid[mi];
        std::tie(row.b, row.eta) = point_config(si, mi, k);
        row.noise = spec.noise_norm;
        row.solver = solver_kind_name(spec.solvers[k]);
        row.metric = "recovery_probability";
        row.value = probability_of_recovery(
            trimmed_trials(errs, spec.trim_fraction), threshold);
        report.rows.push_back(std::move(row));
      }
  add_manifest(report, "failed_or_diverged_trials", std::to_string(failed));
  return report;
}

namespace {

Report run_curve_sweep(const ExperimentSpec& spec, bool per_iter) {
  // block_size sweeps vary b with error-vs-epoch curves; learning_rate
  // sweeps vary eta with error-vs-iteration curves
  const bool by_eta = per_iter;
  const auto eta_grid = resolve_eta_grid(spec);
  const int ng = by_eta ? int(eta_grid.size()) : int(spec.b_values.size());
  if (ng == 0) throw std::invalid_argument("sweep: empty grid");
  const int nk = int(spec.solvers.size());

  // curves[grid][solver][trial]
  std::vector<std::vector<std::vector<std::vector<double>>>> curves(
      ng, std::vector<std::vector<std::vector<double>>>(
              nk, std::vector<std::vector<double>>(spec.trials)));

  for_each_index(spec.trials, spec.exec, [&](int trial) {
    SynthSpec sspec = make_synth_spec(spec, spec.s, spec.m, spec.noise_norm,
                                      point_tag(spec.s, spec.m), trial);
    SynthInstance si;
    try {
      si = synth_instance(sspec);
    } catch (const std::exception&) {
      return;
    }
    for (int gi = 0; gi < ng; ++gi)
      for (int k = 0; k < nk; ++k) {
        const int b = by_eta ? spec.b : spec.b_values[gi];
        const double eta = by_eta ? eta_grid[gi] : spec.eta;
        curves[gi][k][trial] = error_curve(
            *spec.graph, si,
            make_solver_config(spec, spec.solvers[k], k, sspec.seed, spec.s,
                               b, eta),
            per_iter);
      }
  });

  Report report;
  add_manifest(report, "experiment", sweep_kind_name(spec.kind));
  size_t failed = 0;
  for (int gi = 0; gi < ng; ++gi)
    for (int k = 0; k < nk; ++k) {
      size_t len = 0;
      for (const auto& c : curves[gi][k]) {
        len = std::max(len, c.size());
        if (c.empty()) ++failed;
      }
      const int cap = per_iter ? spec.report_iters : spec.report_epochs;
      if (cap > 0) len = std::min(len, size_t(cap));
      std::vector<double> values(spec.trials);
      for (size_t e = 0; e < len; ++e) {
        for (int t = 0; t < spec.trials; ++t)
          values[t] = curve_at(curves[gi][k][t], e);
        MeanSd ms = trimmed_mean_sd(values, spec.trim_fraction);
        ReportRow row;
        row.experiment = sweep_kind_name(spec.kind);
        row.s = spec.s;
        row.m = spec.m;
        row.b = by_eta ? spec.b : spec.b_values[gi];
        row.eta = by_eta ? eta_grid[gi] : spec.eta;
        row.noise = spec.noise_norm;
        if (per_iter)
          row.iter = int(e) + 1;
        else
          row.epoch = int(e) + 1;
        row.solver = solver_kind_name(spec.solvers[k]);
        row.metric = "trimmed_mean_error";
        row.value = ms.mean;
        row.stddev = ms.sd;
        report.rows.push_back(std::move(row));
      }
    }
  add_manifest(report, "failed_or_diverged_trials", std::to_string(failed));
  return report;
}

Report run_noise_sweep(const ExperimentSpec& spec) {
  if (spec.noise_values.empty() || spec.b_values.empty())
    throw std::invalid_argument("noise sweep: empty grid");
  const int nb = int(spec.b_values.size());
  const int nn = int(spec.noise_values.size());
  const int nk = int(spec.solvers.size());
  const size_t cut =
      size_t(std::floor(spec.trim_fraction * double(spec.trials)));

  // min_m[noise][b][solver], -1 when no m in range reaches probability 1
  std::vector<int> min_m(size_t(nn) * nb * nk, -1);
  for_each_index(nn * nb * nk, spec.exec, [&](int combo) {
    const int k = combo % nk;
    const int bi = (combo / nk) % nb;
    const int ni = combo / (nk * nb);
    const double noise = spec.noise_values[ni];
    const double threshold = success_threshold_for(spec, noise);
    for (int m = spec.m_min; m <= spec.m_max; m += spec.m_step) {
      size_t failures = 0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        SynthSpec sspec = make_synth_spec(spec, spec.s, m, noise,
                                          point_tag(spec.s, m, ni + 1),
                                          trial);
        double err = kInf;
        try {
          SynthInstance si = synth_instance(sspec);
          err = final_error(
              *spec.graph, si,
              make_solver_config(spec, spec.solvers[k], k, sspec.seed, spec.s,
                                 spec.b_values[bi], spec.eta));
        } catch (const std::exception&) {
        }
        // probability 1 after trimming allows at most `cut` failures;
        // one more and this m cannot qualify
        if (err > threshold && ++failures > cut) break;
      }
      if (failures <= cut) {
        min_m[combo] = m;
        break;
      }
    }
  });

  Report report;
  add_manifest(report, "experiment", sweep_kind_name(spec.kind));
  for (int ni = 0; ni < nn; ++ni)
    for (int bi = 0; bi < nb; ++bi)
      for (int k = 0; k < nk; ++k) {
        ReportRow row;
        row.experiment = sweep_kind_name(spec.kind);
        row.s = spec.s;
        row.b = spec.b_values[bi];
        row.eta = spec.eta;
        row.noise = spec.noise_values[ni];
        row.solver = solver_kind_name(spec.solvers[k]);
        row.metric = "min_m";
        row.value = double(min_m[(size_t(ni) * nb + bi) * nk + k]);
        report.rows.push_back(std::move(row));
      }
  return report;
}

}  // namespace

Report run_sweep(const ExperimentSpec& spec) {
  validate_common(spec);
  switch (spec.kind) {
    case SweepKind::block_size: return run_curve_sweep(spec, false);
    case SweepKind::learning_rate: return run_curve_sweep(spec, true);
    case SweepKind::noise: return run_noise_sweep(spec);
    default:
      throw std::invalid_argument("run_sweep: not a sweep kind");
  }
}

Report run_experiment(const ExperimentSpec& spec) {
  if (spec.kind == SweepKind::recovery_curve ||
      spec.kind == SweepKind::benchmark_graphs)
    return run_recovery_curve(spec);
  return run_sweep(spec);
}

namespace {

std::string int_cell(int v) { return v < 0 ? "" : std::to_string(v); }

std::string dbl_cell(double v) {
  return std::isnan(v) ? "" : format_sig(v);
}

double sort_key(double v) { return std::isnan(v) ? -kInf : v; }

bool row_less(const ReportRow& a, const ReportRow& b) {
  auto key = [](const ReportRow& r) {
    return std::make_tuple(r.experiment, r.s, r.m, r.b, sort_key(r.eta),
                           sort_key(r.noise), r.epoch, r.iter, r.fold,
                           r.solver, r.metric);
  };
  return key(a) < key(b);
}

}  // namespace

std::string report_rows_text(const Report& report) {
  std::vector<ReportRow> rows = report.rows;
  std::stable_sort(rows.begin(), rows.end(), row_less);
  std::ostringstream out;
  out << "experiment,s,m,b,eta,noise,epoch,iter,fold,solver,metric,value,"
         "stddev\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << int_cell(r.s) << ',' << int_cell(r.m) << ','
        << int_cell(r.b) << ',' << dbl_cell(r.eta) << ',' << dbl_cell(r.noise)
        << ',' << int_cell(r.epoch) << ',' << int_cell(r.iter) << ','
        << int_cell(r.fold) << ',' << r.solver << ',' << r.metric << ','
        << dbl_cell(r.value) << ',' << dbl_cell(r.stddev) << '\n';
  }
  return out.str();
}

void write_report_csv(const std::string& path, const Report& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_rows_text(report);
}

void write_manifest(const std::string& path, const Report& report) {
  nlohmann::ordered_json j;
  for (const auto& [key, value] : report.manifest) j[key] = value;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace gsiht
