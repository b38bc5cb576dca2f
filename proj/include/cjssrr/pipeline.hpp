#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "cjssrr/baseline.hpp"
#include "cjssrr/estimators.hpp"
#include "cjssrr/filter.hpp"
#include "cjssrr/sparse.hpp"
#include "cjssrr/spectral.hpp"
#include "cjssrr/subspace.hpp"

namespace cjssrr {

enum class DegreeRule {
  Practical,     // D pi^2 / w^{4/3} + pi^2 (M-1)^2 / (K^2 w), minus 2
  Constant,      // pi^2 w^{-4/3} + pi^2 w^{-1}, minus 2
  ConstantRaw,   // pi^2 w^{-4/3} + pi^2 w^{-1}
};
const char* to_string(DegreeRule rule);
DegreeRule degree_rule_from_string(const std::string& name);

/// End-to-end run settings; unset optionals mean `auto`.
struct RunConfig {
  std::string matrix_path;
  double a = 0.0;
  double b = 0.0;
  std::size_t M = 4;
  std::optional<std::size_t> ell;
  std::optional<std::size_t> degree;
  DegreeRule degree_rule = DegreeRule::Practical;
  double D = 2.0;
  double K = 7.0;
  double tol = 1e-10;
  std::size_t max_restarts = 30;
  std::size_t n_ev_target = 1;
  std::size_t lanczos_steps = 50;
  std::uint64_t seed = 0;
  BasisKind basis = BasisKind::Chebyshev;
  std::size_t quad_nodes = 16;
  double krylov_tol = 1e-12;
  std::size_t krylov_maxit = 20000;
  std::optional<std::pair<double, double>> spectral_bounds;
  std::size_t count_samples = 50;
  std::optional<std::size_t> count_degree;
  std::string report_path;
  // Optional independent tally charged by every solver product (not Lanczos or counting).
  MvCounter* audit = nullptr;
};

/// Everything resolved before the restart loop starts.
struct SolveSetup {
  SpectralTransform transform;
  bool bounds_supplied = false;
  std::uint64_t lanczos_mv = 0;
  TargetInterval interval;
  std::size_t degree = 0;
  std::optional<CountEstimate> count;
  std::size_t ell = 0;
  DenseBlock v0;
};

/// Resolves spectral bounds, degree, count estimate and ell, and draws V0.
SolveSetup prepare(const SparseSymmetric& a, const RunConfig& cfg);

/// Degree for the configured rule on the mapped width.
std::size_t resolve_degree(const RunConfig& cfg, double width);

struct SolveOutcome {
  SolveSetup setup;
  SolveReport report;
  double wall_time_s = 0.0;
};

struct BaselineOutcome {
  SolveSetup setup;
  BaselineReport result;
  double wall_time_s = 0.0;
};

SolveOutcome solve(const SparseSymmetric& a, const RunConfig& cfg);
SolveOutcome solve(const SparseSymmetric& a, const RunConfig& cfg, const SolveSetup& setup);
BaselineOutcome solve_baseline(const SparseSymmetric& a, const RunConfig& cfg);
BaselineOutcome solve_baseline(const SparseSymmetric& a, const RunConfig& cfg, const SolveSetup& setup);

struct BenchOutcome {
  SolveOutcome cj;
  BaselineOutcome baseline;
  double speedup_mv = 0.0;  // baseline MVs / CJ MVs
};

/// Both methods from the same V0.
BenchOutcome bench(const SparseSymmetric& a, const RunConfig& cfg);

}  // namespace cjssrr
