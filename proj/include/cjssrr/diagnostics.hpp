#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cjssrr/filter.hpp"
#include "cjssrr/sparse.hpp"
#include "cjssrr/spectral.hpp"

namespace cjssrr {

// Jackson kernel ------------------------------------------------------------

/// u_d(phi) = 1/2 + sum_j rho_{j,d} cos(j phi).
double kernel_value(std::size_t d, double phi);

/// (1/pi) int_{-pi}^{pi} |phi|^k u_d(phi) dphi by adaptive quadrature.
double kernel_moment(std::size_t d, int k);

/// Upper bound for kernel_moment(d, k), k in {0, 1, 2, 4}. For k = 4 the
/// sharper (1/4 + (d+1) pi^2 / (16 (d+2)^2)) pi^6 / (d+2)^3 form.
double kernel_moment_bound(std::size_t d, int k);
/// pi^6 / (4 (d+2)^3), the leading-order fourth moment.
double kernel_fourth_moment_asymptote(std::size_t d);

// Pointwise filter error ----------------------------------------------------

/// Which error bound applies at a point of [-1, 1].
enum class BoundKind { Outside, Inside, AtA, AtB };
const char* to_string(BoundKind kind);

struct PointBound {
  BoundKind kind = BoundKind::Outside;
  double value = 0.0;
};

/// Sup norms on [a_t, b_t] of T_m(s(t)) and its first two derivatives.
struct ChebyshevNorms {
  double p = 1.0;
  double dp = 0.0;
  double d2p = 0.0;
};
ChebyshevNorms chebyshev_norms(const TargetInterval& iv, std::size_t m);

/// Pointwise bound on |F_d(p)(t) - p(t) h(t)| for p = T_m(s(t)), with the
/// angular derivative norms replaced by |p'| and |p'| + |p''|.
PointBound pointwise_bound(const TargetInterval& iv, std::size_t p_degree, double t, std::size_t d);

/// p(t) h(t) with h = 1 inside, 1/2 at the ends and 0 outside.
double step_target(const TargetInterval& iv, std::size_t p_degree, double t);

struct ProbeRow {
  std::size_t d = 0;
  double t = 0.0;
  std::size_t p_degree = 0;
  double error = 0.0;
  BoundKind bound_kind = BoundKind::Outside;
  double bound = 0.0;
};

/// Error and bound for every (d, t). Coefficients are computed once at the
/// largest degree and truncated.
std::vector<ProbeRow> filter_probe(const TargetInterval& iv, std::size_t p_degree, const std::vector<double>& points,
                                   const std::vector<std::size_t>& degrees);

/// Header `d,t,p_degree,error,bound_kind,bound`.
void write_probe_csv(std::ostream& out, const std::vector<ProbeRow>& rows);

/// Roughly log-spaced distinct integers in [d_min, d_max].
std::vector<std::size_t> log_spaced_degrees(std::size_t d_min, std::size_t d_max, std::size_t count);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Convergence-factor bounds --------------------------------------------------

/// Smallest angular distance between alpha / beta and the eigenvalues
/// closest to a and b from inside and outside. Missing neighbours are
/// skipped. Eigenvalues in mapped units.
double delta_min(const TargetInterval& iv, const std::vector<double>& eigenvalues);

/// Bound on |F_d(p)(lambda) - p(lambda) h(lambda)| at an eigenvalue, in
/// mapped units. Throws BoundUndefined when delta_min == 0.
double error_at_eigenvalue_bound(const TargetInterval& iv, double lambda, std::size_t M, std::size_t d,
                                 double delta_min_value, double p_norm = 1.0);

/// T_{M-1}^{(k)}(1).
double markov_constant(std::size_t M, std::size_t k);

struct SpectrumModel {
  std::vector<double> eigenvalues;  // ascending, mapped units
  TargetInterval interval;
  std::size_t i = 1;  // 1-based, in descending order of the in-interval eigenvalues
  std::size_t ell = 1;
  std::size_t M = 1;
};

struct BoundReport {
  double delta_min = 0.0;
  double epsilon = 0.0;
  double tau = 1.0;
  double kappa = 1.0;
  double sigma = 0.0;
  double gamma_hat = 0.0;
  double delta_hat = 0.0;
  double eta_hat = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double ratio = 0.0;  // mu / nu, +inf when inactive
  bool active = false;  // nu > 0
  bool tail_case = false;  // i among the last ell in-interval indices
  std::size_t xi_count = 0;
  double lambda_i = 0.0;
};

/// Convergence-factor bound mu_i / nu_i for the i-th in-interval eigenvalue.
/// Throws BoundUndefined naming the violated hypothesis.
BoundReport convergence_factor_bound(const SpectrumModel& sm, std::size_t d);

// Conditioning ---------------------------------------------------------------

struct ConditioningRow {
  BasisKind basis = BasisKind::Chebyshev;
  std::size_t M = 0;
  std::size_t ell = 0;
  std::size_t d = 0;
  double kappa = 0.0;
  std::size_t rank = 0;
  std::size_t cols = 0;
};

/// Condition number and numerical rank of the moment block for each
/// (basis, M), with M ell fixed to `subspace_dim` (ell = subspace_dim / M).
std::vector<ConditioningRow> conditioning_grid(const SparseSymmetric& a, const SpectralTransform& tr,
                                               const TargetInterval& iv, std::size_t d,
                                               const std::vector<std::size_t>& moments,
                                               const std::vector<BasisKind>& bases, std::size_t subspace_dim,
                                               std::uint64_t seed);

void write_conditioning_csv(std::ostream& out, const std::vector<ConditioningRow>& rows);

}  // namespace cjssrr
