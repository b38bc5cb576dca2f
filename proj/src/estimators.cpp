#include "cjssrr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cjssrr/error.hpp"

namespace cjssrr {

CountEstimate estimate_count(const MappedOperator& op, const TargetInterval& iv, std::size_t d, std::size_t s,
                             std::uint64_t seed) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "estimate_count: degree must be >= 2");
  return estimate_count(op, FilterSpec::build(iv, d, 1), s, seed);
}

CountEstimate estimate_count(const MappedOperator& op, const FilterSpec& spec, std::size_t s, std::uint64_t seed) {
  if (s < 1) throw Error(ErrorKind::InvalidArgument, "estimate_count: need at least one sample");
  const std::size_t n = op.n();
  const FilterSpec zeroth = FilterSpec::from_coefficients(spec.interval, spec.degree, {spec.coeffs.at(0)});

  DenseBlock v(n, s);
  std::mt19937_64 rng(seed);
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t i = 0; i < n; ++i) v(i, j) = (rng() >> 63) ? 1.0 : -1.0;

  const MomentBlock block = build_moment_block(op, v, zeroth);
  CountEstimate est;
  est.samples = s;
  est.seed = seed;
  est.degree = spec.degree;
  est.mv_count = block.mv_count;
  est.per_sample.resize(s);
  double sum = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    est.per_sample[j] = dot(v.col(j), block.s.col(j));
    sum += est.per_sample[j];
  }
  est.n_ev_tilde = sum / static_cast<double>(s) + 1.0;
  return est;
}

DegreeChoice select_degree(double width, std::size_t M, double D, double K) {
  if (!(width > 0.0) || width > 2.0) throw Error(ErrorKind::InvalidArgument, "select_degree: width must be in (0, 2]");
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "select_degree: M must be >= 1");
  if (D < 1.0 || D > 8.0) throw Error(ErrorKind::InvalidArgument, "select_degree: D must be in [1, 8]");
  if (K < 1.0 || K > 10.0) throw Error(ErrorKind::InvalidArgument, "select_degree: K must be in [1, 10]");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double m1 = static_cast<double>(M - 1);
  const double raw = D * pi2 / std::pow(width, 4.0 / 3.0) + pi2 * m1 * m1 / (K * K * width);
  const double d = std::ceil(raw) - 2.0;
  DegreeChoice out;
  out.d = static_cast<std::size_t>(std::max(2.0, d));
  out.D = D;
  out.K = K;
  out.width = width;
  out.M = M;
  return out;
}

std::size_t constant_degree(double width, bool minus_two) {
  if (!(width > 0.0) || width > 2.0) throw Error(ErrorKind::InvalidArgument, "constant_degree: width must be in (0, 2]");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double d = std::ceil(pi2 / std::pow(width, 4.0 / 3.0) + pi2 / width) - (minus_two ? 2.0 : 0.0);
  return static_cast<std::size_t>(std::max(2.0, d));
}

double chebyshev_t_any(std::size_t m, double x) {
  const double md = static_cast<double>(m);
  if (std::abs(x) <= 1.0) return std::cos(md * std::acos(x));
  const double v = std::cosh(md * std::acosh(std::abs(x)));
  return (x < 0.0 && m % 2 == 1) ? -v : v;
}

DegreeBound theoretical_degree_bound(const TargetInterval& iv, std::size_t M, std::size_t n_ev, std::size_t ell,
                                     double zeta, bool top_at_b) {
  if (M < 1 || n_ev < 1) throw Error(ErrorKind::InvalidArgument, "theoretical_degree_bound: M and n_ev must be >= 1");
  if (!(zeta > 0.0 && zeta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "theoretical_degree_bound: zeta in (0, 1]");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double w = iv.width_t();
  DegreeBound out;
  out.delta_min = w / static_cast<double>(n_ev);
  const double lead = pi2 / std::pow(out.delta_min, 4.0 / 3.0);

  if (M == 1) {
    out.rhs = lead * std::cbrt((1.0 + zeta) / zeta);
  } else {
    if (n_ev <= 1 + ell)
      throw Error(ErrorKind::BoundUndefined, "theoretical_degree_bound: requires n_ev - 1 - ell > 0 when M >= 2");
    const double ne = static_cast<double>(n_ev), l = static_cast<double>(ell);
    const double den = ne - 1.0 - l;
    const double t_eps = chebyshev_t_any(M - 1, (ne - 1.0 + l) / den);
    out.epsilon = 1.0 / t_eps;
    const double m1 = static_cast<double>(M - 1);
    const double second = pi2 * m1 * m1 / w;
    if (top_at_b) {
      out.tau = 1.0;
      if (!(zeta / 2.0 > out.epsilon))
        throw Error(ErrorKind::BoundUndefined, "theoretical_degree_bound: zeta/2 does not exceed epsilon");
      const double f = (1.0 + zeta) / (zeta / 2.0 - out.epsilon);
      out.rhs = std::max(lead * std::cbrt(f), second * f);
    } else {
      out.tau = chebyshev_t_any(M - 1, (ne + 1.0 + l) / den) / t_eps;
      if (!(zeta > out.epsilon))
        throw Error(ErrorKind::BoundUndefined, "theoretical_degree_bound: zeta does not exceed epsilon");
      const double f = (1.0 + zeta) / (zeta - out.epsilon) * out.tau;
      const double g = (1.0 + zeta) / (zeta - out.epsilon / 2.0) * out.tau;
      out.rhs = std::max(lead * std::cbrt(f), second * std::max(std::sqrt(f), g));
    }
  }
  // smallest integer d with d + 2 > rhs
  out.min_degree = static_cast<std::size_t>(std::max(0.0, std::floor(out.rhs) - 1.0));
  return out;
}

std::size_t recommended_ell(double n_ev_tilde, std::size_t M) {
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "recommended_ell: M must be >= 1");
  const double ell = std::ceil(1.5 * std::max(n_ev_tilde, 0.0) / static_cast<double>(M));
  return static_cast<std::size_t>(std::max(1.0, ell));
}

}  // namespace cjssrr
