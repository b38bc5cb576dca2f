#include "cjssrr/pipeline.hpp"

#include <chrono>

#include "cjssrr/error.hpp"

namespace cjssrr {

const char* to_string(DegreeRule rule) {
  switch (rule) {
    case DegreeRule::Practical: return "practical";
    case DegreeRule::Constant: return "constant";
    case DegreeRule::ConstantRaw: return "constant-raw";
  }
  return "unknown";
}

DegreeRule degree_rule_from_string(const std::string& name) {
  if (name == "practical") return DegreeRule::Practical;
  if (name == "constant") return DegreeRule::Constant;
  if (name == "constant-raw") return DegreeRule::ConstantRaw;
  throw Error(ErrorKind::InvalidArgument, "unknown degree rule '" + name + "' (practical, constant, constant-raw)");
}

namespace {
// Independent streams for the three random draws of a run.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return seed * 0x9E3779B97F4A7C15ULL + stream; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

std::size_t resolve_degree(const RunConfig& cfg, double width) {
  if (cfg.degree) return *cfg.degree;
  switch (cfg.degree_rule) {
    case DegreeRule::Practical: return select_degree(width, cfg.M, cfg.D, cfg.K).d;
    case DegreeRule::Constant: return constant_degree(width, true);
    case DegreeRule::ConstantRaw: return constant_degree(width, false);
  }
  return 2;
}

SolveSetup prepare(const SparseSymmetric& a, const RunConfig& cfg) {
  if (cfg.M < 1) throw Error(ErrorKind::InvalidArgument, "M must be >= 1");
  if (cfg.degree && *cfg.degree < 2) throw Error(ErrorKind::InvalidArgument, "degree must be >= 2");
  if (cfg.ell && *cfg.ell < 1) throw Error(ErrorKind::InvalidArgument, "ell must be >= 1");
  if (!(cfg.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (a.n() == 0) throw Error(ErrorKind::InvalidArgument, "empty matrix");

  SolveSetup s;
  if (cfg.spectral_bounds) {
    s.transform = SpectralTransform::from_bounds(cfg.spectral_bounds->first, cfg.spectral_bounds->second);
    s.bounds_supplied = true;
  } else {
    if (cfg.lanczos_steps < 2) throw Error(ErrorKind::InvalidArgument, "lanczos steps must be >= 2");
    MvCounter lanczos;
    s.transform = estimate_spectral_range(a, cfg.lanczos_steps, stream_seed(cfg.seed, 2), &lanczos);
    s.lanczos_mv = lanczos.value();
  }
  s.interval = make_interval(s.transform, cfg.a, cfg.b);
  s.degree = resolve_degree(cfg, s.interval.width_t());

  if (cfg.ell) {
    s.ell = *cfg.ell;
  } else {
    const MappedOperator op(a, s.transform);
    const std::size_t dc = cfg.count_degree.value_or(s.degree);
    s.count = estimate_count(op, s.interval, dc, cfg.count_samples, stream_seed(cfg.seed, 1));
    s.ell = recommended_ell(s.count->n_ev_tilde, cfg.M);
  }
  if (s.ell * cfg.M > a.n()) throw Error(ErrorKind::InvalidArgument, "M * ell exceeds the matrix dimension");
  s.v0 = random_normal_block(a.n(), s.ell, stream_seed(cfg.seed, 0));
  return s;
}

namespace {
SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.tol = cfg.tol;
  o.max_restarts = cfg.max_restarts;
  o.n_ev_target = cfg.n_ev_target;
  o.audit = cfg.audit;
  return o;
}
}  // namespace

SolveOutcome solve(const SparseSymmetric& a, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveSetup setup = prepare(a, cfg);
  SolveOutcome out = solve(a, cfg, setup);
  out.wall_time_s = seconds_since(t0);
  return out;
}

SolveOutcome solve(const SparseSymmetric& a, const RunConfig& cfg, const SolveSetup& setup) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.setup = setup;
  const FilterSpec spec = FilterSpec::build(setup.interval, setup.degree, cfg.M, cfg.basis);
  out.report = run_cjssrr(a, setup.transform, setup.interval, spec, setup.v0, solver_options(cfg));
  out.wall_time_s = seconds_since(t0);
  return out;
}

BaselineOutcome solve_baseline(const SparseSymmetric& a, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveSetup setup = prepare(a, cfg);
  BaselineOutcome out = solve_baseline(a, cfg, setup);
  out.wall_time_s = seconds_since(t0);
  return out;
}

BaselineOutcome solve_baseline(const SparseSymmetric& a, const RunConfig& cfg, const SolveSetup& setup) {
  const auto t0 = std::chrono::steady_clock::now();
  BaselineOutcome out;
  out.setup = setup;
  BaselineOptions opts;
  opts.q = cfg.quad_nodes;
  opts.krylov_tol = cfg.krylov_tol;
  opts.krylov_maxit = cfg.krylov_maxit;
  opts.solver = solver_options(cfg);
  out.result = run_baseline(a, setup.transform.norm_estimate(), setup.interval, cfg.M, setup.v0, opts);
  out.wall_time_s = seconds_since(t0);
  return out;
}

BenchOutcome bench(const SparseSymmetric& a, const RunConfig& cfg) {
  const SolveSetup setup = prepare(a, cfg);
  BenchOutcome out;
  out.cj = solve(a, cfg, setup);
  out.baseline = solve_baseline(a, cfg, setup);
  const double cj_mv = static_cast<double>(out.cj.report.mv_exact);
  out.speedup_mv = cj_mv > 0.0 ? static_cast<double>(out.baseline.result.report.mv_exact) / cj_mv : 0.0;
  return out;
}

}  // namespace cjssrr
