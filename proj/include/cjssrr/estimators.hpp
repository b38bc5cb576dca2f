#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cjssrr/filter.hpp"
#include "cjssrr/spectral.hpp"

namespace cjssrr {

struct CountEstimate {
  double n_ev_tilde = 0.0;
  std::size_t samples = 0;
  std::vector<double> per_sample;  // v_i^T F_d(1)(A) v_i
  std::uint64_t seed = 0;
  std::size_t degree = 0;
  std::uint64_t mv_count = 0;
};

/// Stochastic trace estimate of the zeroth filter with Rademacher probes,
/// plus one. Uses d MVs per sample; deterministic for a fixed seed.
CountEstimate estimate_count(const MappedOperator& op, const TargetInterval& iv, std::size_t d, std::size_t s,
                             std::uint64_t seed);
/// Same, reusing the p = 1 row of an existing filter.
CountEstimate estimate_count(const MappedOperator& op, const FilterSpec& spec, std::size_t s, std::uint64_t seed);

struct DegreeChoice {
  std::size_t d = 2;
  double D = 1.0;
  double K = 10.0;
  double width = 0.0;
  std::size_t M = 1;
};

/// d = ceil(D pi^2 / w^{4/3} + pi^2 (M-1)^2 / (K^2 w)) - 2 on the mapped
/// width w, clamped to at least 2.
DegreeChoice select_degree(double width, std::size_t M, double D = 1.0, double K = 10.0);

/// Constant degree ceil(pi^2 w^{-4/3} + pi^2 w^{-1}), optionally minus 2.
std::size_t constant_degree(double width, bool minus_two = true);

struct DegreeBound {
  double rhs = 0.0;             // d + 2 must exceed this
  std::size_t min_degree = 0;   // smallest integer d satisfying it
  double delta_min = 0.0;
  double epsilon = 0.0;
  double tau = 1.0;
};

/// Sufficient degree for a contraction factor zeta under a uniform
/// eigenvalue-spacing model (Delta_min ~ mapped width / n_ev). Diagnostic
/// only. Throws BoundUndefined when M >= 2 and n_ev - 1 - ell <= 0, or when
/// zeta does not exceed the Chebyshev tail epsilon.
DegreeBound theoretical_degree_bound(const TargetInterval& iv, std::size_t M, std::size_t n_ev, std::size_t ell,
                                     double zeta = 1.0, bool top_at_b = false);

/// ceil(1.5 n_ev / M), at least 1.
std::size_t recommended_ell(double n_ev_tilde, std::size_t M);

/// T_m(x) for any real x; cosh form outside [-1, 1].
double chebyshev_t_any(std::size_t m, double x);

}  // namespace cjssrr
