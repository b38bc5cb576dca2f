#pragma once

#include <cstddef>
#include <cstdint>

#include "cjssrr/sparse.hpp"

namespace cjssrr {

/// Estimated spectral range of A and the affine map l(t) of that range onto
/// [-1, 1].
struct SpectralTransform {
  double lambda_min_est = -1.0;
  double lambda_max_est = 1.0;
  bool breakdown = false;       // Lanczos stopped on an invariant subspace
  std::size_t lanczos_steps = 0;  // 0 when the bounds were supplied

  /// Throws InvalidArgument unless lo < hi.
  static SpectralTransform from_bounds(double lo, double hi);

  double scale() const noexcept { return 2.0 / (lambda_max_est - lambda_min_est); }
  double shift() const noexcept {
    return (lambda_max_est + lambda_min_est) / (lambda_max_est - lambda_min_est);
  }
  /// l(t); exact at both ends of the range.
  double map(double t) const noexcept {
    return ((t - lambda_min_est) + (t - lambda_max_est)) / (lambda_max_est - lambda_min_est);
  }
  double unmap(double s) const noexcept {
    return 0.5 * (s * (lambda_max_est - lambda_min_est) + lambda_max_est + lambda_min_est);
  }
  /// max(|lambda_min|, |lambda_max|), the norm used in relative residuals.
  double norm_estimate() const noexcept;
};

/// Target interval [a, b] in original units, its image under l and the
/// corresponding arccos angles (alpha > beta).
struct TargetInterval {
  double a = 0.0, b = 0.0;
  double a_t = 0.0, b_t = 0.0;
  double alpha = 0.0, beta = 0.0;

  double width_t() const noexcept { return b_t - a_t; }
  bool contains(double lambda) const noexcept { return lambda >= a && lambda <= b; }
};

/// Symmetric Lanczos with full reorthogonalisation from a seeded random
/// start. Returns [theta_s - |r_s|, theta_1 + |r_1|].
SpectralTransform estimate_spectral_range(const SparseSymmetric& a, std::size_t steps = 50,
                                          std::uint64_t seed = 0, MvCounter* counter = nullptr);

/// Requires lambda_min_est <= a < b <= lambda_max_est.
TargetInterval make_interval(const SpectralTransform& tr, double a, double b);

/// Interval given directly in mapped coordinates (-1 <= a_t < b_t <= 1).
TargetInterval make_mapped_interval(double a_t, double b_t);

}  // namespace cjssrr
