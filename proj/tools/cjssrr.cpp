// Command-line front end: solve | count | probe | baseline | bench | conditioning.
//
// Exit codes: 0 success, 1 input error, 2 max restarts reached without
// convergence, 3 numerical failure, 4 unexpected error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "cjssrr/diagnostics.hpp"
#include "cjssrr/error.hpp"
#include "cjssrr/parallel.hpp"
#include "cjssrr/pipeline.hpp"
#include "cjssrr/report.hpp"

namespace {

using namespace cjssrr;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUnconverged = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedFormat:
    case ErrorKind::NotSymmetric:
    case ErrorKind::MalformedFile:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Io:
      return kExitInput;
    case ErrorKind::RankDeficient:
    case ErrorKind::Divergence:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::BoundUndefined:
      return kExitNumerical;
  }
  return kExitInternal;
}

// Raw option strings; `auto` handling happens in resolve().
struct CliOptions {
  RunConfig cfg;
  std::string ell = "auto";
  std::string degree = "auto";
  std::string degree_rule = "practical";
  std::string basis = "chebyshev";
  std::string bounds = "auto";
  std::string count_degree = "auto";
  int threads = 0;
};

std::optional<std::size_t> parse_auto_count(const std::string& text, const char* name) {
  if (text == "auto") return std::nullopt;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || v < 0)
    throw Error(ErrorKind::InvalidArgument, std::string("--") + name + " must be 'auto' or a nonnegative integer");
  return static_cast<std::size_t>(v);
}

void resolve(CliOptions& o) {
  o.cfg.ell = parse_auto_count(o.ell, "ell");
  o.cfg.degree = parse_auto_count(o.degree, "degree");
  o.cfg.count_degree = parse_auto_count(o.count_degree, "count-degree");
  o.cfg.degree_rule = degree_rule_from_string(o.degree_rule);
  o.cfg.basis = basis_from_string(o.basis);
  if (o.bounds != "auto") {
    std::istringstream ss(o.bounds);
    double lo = 0, hi = 0;
    char comma = 0;
    if (!(ss >> lo >> comma >> hi) || comma != ',' || !ss.eof())
      throw Error(ErrorKind::InvalidArgument, "--spectral-bounds must be 'auto' or 'lo,hi'");
    o.cfg.spectral_bounds = std::make_pair(lo, hi);
  }
  if (o.threads > 0) set_thread_count(o.threads);
}

void add_common(CLI::App* cmd, CliOptions& o, bool solver_flags) {
  RunConfig& c = o.cfg;
  cmd->add_option("--matrix", c.matrix_path, "Matrix Market file")->required();
  cmd->add_option("--a", c.a, "left end of the interval")->required();
  cmd->add_option("--b", c.b, "right end of the interval")->required();
  cmd->add_option("--M", c.M, "moment count")->capture_default_str();
  cmd->add_option("--degree", o.degree, "series degree or 'auto'")->capture_default_str();
  cmd->add_option("--degree-rule", o.degree_rule, "practical | constant | constant-raw")->capture_default_str();
  cmd->add_option("--D", c.D, "degree rule constant D in [1, 8]")->capture_default_str();
  cmd->add_option("--K", c.K, "degree rule constant K in [1, 10]")->capture_default_str();
  cmd->add_option("--lanczos-steps", c.lanczos_steps, "Lanczos steps for the spectral range")->capture_default_str();
  cmd->add_option("--spectral-bounds", o.bounds, "'auto' or 'lo,hi'")->capture_default_str();
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--count-samples", c.count_samples, "Rademacher samples for the count estimate")->capture_default_str();
  cmd->add_option("--count-degree", o.count_degree, "degree for the count estimate or 'auto'")->capture_default_str();
  cmd->add_option("--report", c.report_path, "output file (default stdout)");
  cmd->add_option("--threads", o.threads, "worker threads (default $CJSSRR_THREADS or 1)");
  if (!solver_flags) return;
  cmd->add_option("--ell", o.ell, "block size or 'auto'")->capture_default_str();
  cmd->add_option("--tol", c.tol, "relative residual tolerance")->capture_default_str();
  cmd->add_option("--max-restarts", c.max_restarts, "iteration cap")->capture_default_str();
  cmd->add_option("--n-ev-target", c.n_ev_target, "minimum converged in-interval pairs")->capture_default_str();
  cmd->add_option("--basis", o.basis, "chebyshev | scaled | monomial")->capture_default_str();
  cmd->add_option("--quad-nodes", c.quad_nodes, "contour nodes for the baseline")->capture_default_str();
  cmd->add_option("--krylov-tol", c.krylov_tol, "shifted solve tolerance for the baseline")->capture_default_str();
  cmd->add_option("--krylov-maxit", c.krylov_maxit, "shifted solve iteration cap")->capture_default_str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_solve(CliOptions& o) {
  resolve(o);
  const SparseSymmetric a = read_matrix_market(o.cfg.matrix_path);
  const SolveOutcome out = solve(a, o.cfg);
  emit(o.cfg.report_path, dump(solve_to_json(out, o.cfg)));
  return out.report.converged ? kExitOk : kExitUnconverged;
}

int cmd_baseline(CliOptions& o) {
  resolve(o);
  const SparseSymmetric a = read_matrix_market(o.cfg.matrix_path);
  const BaselineOutcome out = solve_baseline(a, o.cfg);
  emit(o.cfg.report_path, dump(baseline_to_json(out, o.cfg)));
  return out.result.report.converged ? kExitOk : kExitUnconverged;
}

int cmd_bench(CliOptions& o) {
  resolve(o);
  const SparseSymmetric a = read_matrix_market(o.cfg.matrix_path);
  const BenchOutcome out = bench(a, o.cfg);
  emit(o.cfg.report_path, dump(bench_to_json(out, o.cfg)));
  return out.cj.report.converged && out.baseline.result.report.converged ? kExitOk : kExitUnconverged;
}

int cmd_count(CliOptions& o) {
  resolve(o);
  const auto t0 = std::chrono::steady_clock::now();
  const SparseSymmetric a = read_matrix_market(o.cfg.matrix_path);
  RunConfig cfg = o.cfg;
  cfg.ell.reset();
  const SolveSetup s = prepare(a, cfg);
  json root;
  root["schema_version"] = kReportSchemaVersion;
  root["config_echo"] = config_to_json(o.cfg);
  root["spectral_range"] = {{"lambda_min", s.transform.lambda_min_est},
                            {"lambda_max", s.transform.lambda_max_est},
                            {"source", s.bounds_supplied ? "supplied" : "lanczos"},
                            {"breakdown", s.transform.breakdown},
                            {"lanczos_steps", s.transform.lanczos_steps},
                            {"mv", s.lanczos_mv}};
  root["degree"] = s.degree;
  root["count_estimate"] = count_to_json(*s.count);
  root["recommended_ell"] = s.ell;
  root["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(o.cfg.report_path, dump(root));
  return kExitOk;
}

struct ProbeOptions {
  double a = -0.2, b = 0.4;
  std::size_t p_degree = 0;
  std::vector<double> points{-0.6, -0.2, 0.1};
  std::size_t d_min = 100, d_max = 10000, num = 25;
  std::string out;
  int threads = 0;
};

int cmd_probe(const ProbeOptions& p) {
  if (p.threads > 0) set_thread_count(p.threads);
  const TargetInterval iv = make_mapped_interval(p.a, p.b);
  const auto degrees = log_spaced_degrees(p.d_min, p.d_max, p.num);
  const auto rows = filter_probe(iv, p.p_degree, p.points, degrees);
  std::ostringstream csv;
  write_probe_csv(csv, rows);
  emit(p.out, csv.str());
  return kExitOk;
}

struct ConditioningOptions {
  std::string moments = "4,8,16";
  std::string bases = "monomial,scaled,chebyshev";
  std::string subspace_dim = "auto";
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_conditioning(CliOptions& o, const ConditioningOptions& c) {
  resolve(o);
  const SparseSymmetric a = read_matrix_market(o.cfg.matrix_path);
  std::vector<std::size_t> moments;
  for (const auto& m : split(c.moments)) {
    const auto v = parse_auto_count(m, "moments");
    if (!v || *v < 1) throw Error(ErrorKind::InvalidArgument, "--moments entries must be positive integers");
    moments.push_back(*v);
  }
  std::vector<BasisKind> bases;
  for (const auto& b : split(c.bases)) bases.push_back(basis_from_string(b));

  RunConfig cfg = o.cfg;
  cfg.ell = 1;
  SolveSetup s = prepare(a, cfg);
  std::size_t dim = 0;
  if (auto fixed = parse_auto_count(c.subspace_dim, "subspace-dim")) {
    dim = *fixed;
  } else {
    const MappedOperator op(a, s.transform);
    const auto est = estimate_count(op, s.interval, o.cfg.count_degree.value_or(s.degree), o.cfg.count_samples,
                                    o.cfg.seed + 1);
    // 16 * ceil(1.5 n_ev / 16), so every M in {1, 2, 4, 8, 16} divides it
    dim = 16 * static_cast<std::size_t>(std::ceil(1.5 * std::max(est.n_ev_tilde, 1.0) / 16.0));
  }
  const auto rows = conditioning_grid(a, s.transform, s.interval, s.degree, moments, bases, dim, o.cfg.seed);
  std::ostringstream csv;
  write_conditioning_csv(csv, rows);
  emit(o.cfg.report_path, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval eigensolver with Chebyshev-Jackson moment filtering"};
  app.require_subcommand(1);

  CliOptions solve_o, count_o, base_o, bench_o, cond_o;
  ProbeOptions probe_o;
  ConditioningOptions cond_extra;

  auto* solve_cmd = app.add_subcommand("solve", "filtered-moment Rayleigh-Ritz solve; JSON report");
  add_common(solve_cmd, solve_o, true);
  auto* count_cmd = app.add_subcommand("count", "stochastic eigenvalue count in [a, b]; JSON");
  add_common(count_cmd, count_o, false);
  auto* base_cmd = app.add_subcommand("baseline", "contour-integral Rayleigh-Ritz solve; JSON report");
  add_common(base_cmd, base_o, true);
  auto* bench_cmd = app.add_subcommand("bench", "run both solvers from the same start block; JSON");
  add_common(bench_cmd, bench_o, true);
  auto* cond_cmd = app.add_subcommand("conditioning", "condition number and rank per (basis, M); CSV");
  cond_o.degree_rule = "constant-raw";
  add_common(cond_cmd, cond_o, false);
  cond_cmd->add_option("--moments", cond_extra.moments, "comma-separated M values")->capture_default_str();
  cond_cmd->add_option("--bases", cond_extra.bases, "comma-separated bases")->capture_default_str();
  cond_cmd->add_option("--subspace-dim", cond_extra.subspace_dim, "M * ell, or 'auto'")->capture_default_str();

  auto* probe_cmd = app.add_subcommand("probe", "filter error and bounds against degree; CSV");
  probe_cmd->add_option("--a", probe_o.a, "left end (mapped units)")->capture_default_str();
  probe_cmd->add_option("--b", probe_o.b, "right end (mapped units)")->capture_default_str();
  probe_cmd->add_option("--p-degree", probe_o.p_degree, "degree of the Chebyshev polynomial p")->capture_default_str();
  probe_cmd->add_option("--points", probe_o.points, "evaluation points in [-1, 1]")->delimiter(',');
  probe_cmd->add_option("--d-min", probe_o.d_min, "smallest degree")->capture_default_str();
  probe_cmd->add_option("--d-max", probe_o.d_max, "largest degree")->capture_default_str();
  probe_cmd->add_option("--num-degrees", probe_o.num, "number of log-spaced degrees")->capture_default_str();
  probe_cmd->add_option("--out", probe_o.out, "CSV path (default stdout)");
  probe_cmd->add_option("--threads", probe_o.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_o);
    if (*count_cmd) return cmd_count(count_o);
    if (*base_cmd) return cmd_baseline(base_o);
    if (*bench_cmd) return cmd_bench(bench_o);
    if (*cond_cmd) return cmd_conditioning(cond_o, cond_extra);
    if (*probe_cmd) return cmd_probe(probe_o);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
