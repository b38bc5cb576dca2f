#include "cjssrr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cjssrr/error.hpp"

namespace cjssrr {

SpectralTransform SpectralTransform::from_bounds(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::InvalidArgument, "spectral bounds must satisfy lo < hi");
  SpectralTransform tr;
  tr.lambda_min_est = lo;
  tr.lambda_max_est = hi;
  return tr;
}

double SpectralTransform::norm_estimate() const noexcept {
  return std::max(std::abs(lambda_min_est), std::abs(lambda_max_est));
}

SpectralTransform estimate_spectral_range(const SparseSymmetric& a, std::size_t steps, std::uint64_t seed,
                                          MvCounter* counter) {
  const std::size_t n = a.n();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty matrix");
  steps = std::min(steps, n);
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "lanczos steps must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  const double v_norm = norm2(v);
  for (double& x : v) x /= v_norm;

  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;  // beta[j] couples basis j and j+1
  std::vector<double> w(n);
  double anorm = 0.0;
  bool breakdown = false;
  double beta_last = 0.0;

  basis.push_back(v);
  for (std::size_t j = 0; j < steps; ++j) {
    matvec(a, basis[j], w);
    if (counter) counter->add(1);
    if (j > 0)
      for (std::size_t i = 0; i < n; ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
    const double aj = dot(w, basis[j]);
    for (std::size_t i = 0; i < n; ++i) w[i] -= aj * basis[j][i];
    alpha.push_back(aj);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const double h = dot(w, q);
        for (std::size_t i = 0; i < n; ++i) w[i] -= h * q[i];
      }
    }
    const double bj = norm2(w);
    anorm = std::max(anorm, std::abs(aj) + bj + (j > 0 ? beta[j - 1] : 0.0));
    if (bj <= static_cast<double>(n) * kMachineEps * std::max(anorm, 1e-300)) {
      breakdown = j + 1 < n;
      beta_last = 0.0;
      break;
    }
    beta_last = bj;
    if (j + 1 == steps) break;
    beta.push_back(bj);
    for (std::size_t i = 0; i < n; ++i) w[i] /= bj;
    basis.push_back(w);
  }

  const std::size_t s = alpha.size();
  std::vector<double> off(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(s - 1));
  SymEigResult t = tridiagonal_eig(alpha, off);
  const double r_low = beta_last * std::abs(t.vectors(s - 1, 0));
  const double r_high = beta_last * std::abs(t.vectors(s - 1, s - 1));

  SpectralTransform tr;
  tr.lambda_min_est = t.values.front() - r_low;
  tr.lambda_max_est = t.values.back() + r_high;
  tr.breakdown = breakdown;
  tr.lanczos_steps = s;
  const double mag = std::max({1.0, std::abs(tr.lambda_min_est), std::abs(tr.lambda_max_est)});
  if (tr.lambda_max_est - tr.lambda_min_est <= 1e-12 * mag) {
    // one-point spectrum: widen so the affine map stays defined
    tr.lambda_min_est -= 1e-8 * mag;
    tr.lambda_max_est += 1e-8 * mag;
  }
  return tr;
}

TargetInterval make_interval(const SpectralTransform& tr, double a, double b) {
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "interval requires a < b");
  if (a < tr.lambda_min_est || b > tr.lambda_max_est) {
    std::ostringstream msg;
    msg << "interval [" << a << ", " << b << "] is not inside the spectral range [" << tr.lambda_min_est << ", "
        << tr.lambda_max_est << "]";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  TargetInterval iv;
  iv.a = a;
  iv.b = b;
  iv.a_t = std::clamp(tr.map(a), -1.0, 1.0);
  iv.b_t = std::clamp(tr.map(b), -1.0, 1.0);
  iv.alpha = std::acos(iv.a_t);
  iv.beta = std::acos(iv.b_t);
  return iv;
}

TargetInterval make_mapped_interval(double a_t, double b_t) {
  if (!(a_t < b_t) || a_t < -1.0 || b_t > 1.0)
    throw Error(ErrorKind::InvalidArgument, "mapped interval must satisfy -1 <= a < b <= 1");
  TargetInterval iv;
  iv.a = iv.a_t = a_t;
  iv.b = iv.b_t = b_t;
  iv.alpha = std::acos(a_t);
  iv.beta = std::acos(b_t);
  return iv;
}

}  // namespace cjssrr
