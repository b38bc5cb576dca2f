#pragma once

// Test-only reference implementations and random generators. Dense
// eigendecompositions and complex solves come from Eigen so they share no
// code with the library kernels under test.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "cjssrr/dense.hpp"
#include "cjssrr/filter.hpp"
#include "cjssrr/sparse.hpp"
#include "cjssrr/spectral.hpp"

namespace oracle {

using cjssrr::DenseBlock;

/// Seeded generator with the handful of distributions the property tests use.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  std::mt19937_64& engine() { return rng_; }

  DenseBlock normal_block(std::size_t rows, std::size_t cols) {
    DenseBlock b(rows, cols);
    for (double& x : b.data()) x = normal();
    return b;
  }

  DenseBlock symmetric(std::size_t n) {
    DenseBlock b(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i <= j; ++i) b(i, j) = b(j, i) = normal();
    return b;
  }

  std::vector<double> vector(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = normal();
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

inline Eigen::MatrixXd to_eigen(const DenseBlock& b) {
  Eigen::MatrixXd m(b.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < b.rows(); ++i) m(i, j) = b(i, j);
  return m;
}

inline DenseBlock from_eigen(const Eigen::MatrixXd& m) {
  DenseBlock b(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) b(i, j) = m(i, j);
  return b;
}

/// Q diag(eigs) Q^T with Haar-like random orthogonal Q.
inline DenseBlock rotated_diagonal(const std::vector<double>& eigs, Gen& g) {
  const auto n = static_cast<Eigen::Index>(eigs.size());
  Eigen::MatrixXd z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = g.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = eigs[static_cast<std::size_t>(i)];
  Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose()).eval();
  return from_eigen(a);
}

struct DenseEig {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;
};

inline DenseEig dense_eig(const DenseBlock& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

/// c_j by composite trapezoid in the angle variable with `panels` pieces.
inline double trapezoid_coefficient(const std::function<double(double)>& p, double beta, double alpha,
                                    std::size_t j, std::size_t panels) {
  const double h = (alpha - beta) / static_cast<double>(panels);
  auto f = [&](double th) { return p(std::cos(th)) * std::cos(static_cast<double>(j) * th); };
  double s = 0.5 * (f(beta) + f(alpha));
  for (std::size_t i = 1; i < panels; ++i) s += f(beta + h * static_cast<double>(i));
  return 2.0 / std::numbers::pi * s * h;
}

/// F_d(p_k)(t) in the cosine form cos(j arccos t), independent of the
/// recurrence used by the library.
inline double filter_cosine_form(const cjssrr::FilterSpec& spec, std::size_t k, double t) {
  const double theta = std::acos(std::clamp(t, -1.0, 1.0));
  double s = 0.5 * spec.coeffs[k][0];
  for (std::size_t j = 1; j <= spec.degree; ++j)
    s += spec.rho[j] * spec.coeffs[k][j] * std::cos(static_cast<double>(j) * theta);
  return s;
}

/// X F_d(p_k)(l(Lambda)) X^T V from a dense eigendecomposition.
inline DenseBlock dense_filter_apply(const DenseEig& eig, const cjssrr::SpectralTransform& tr,
                                     const cjssrr::FilterSpec& spec, std::size_t k, const DenseBlock& v) {
  const Eigen::Index n = eig.values.size();
  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) f(i) = filter_cosine_form(spec, k, tr.map(eig.values(i)));
  Eigen::MatrixXd out = eig.vectors * f.asDiagonal() * (eig.vectors.transpose() * to_eigen(v));
  return from_eigen(out);
}

inline double relative_error(const DenseBlock& x, const DenseBlock& ref) {
  return cjssrr::max_abs_diff(x, ref) / std::max(cjssrr::max_abs(ref), 1e-300);
}

/// Analytic eigenvalues of tridiag(-1, 2, -1) of order n, ascending.
inline std::vector<double> laplacian_eigenvalues(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 1; k <= n; ++k)
    v[k - 1] = 2.0 - 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / static_cast<double>(n + 1));
  return v;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

/// Random symmetric tridiagonal matrix; eigenvectors are not coordinate
/// vectors, so stochastic trace estimates carry real variance.
inline cjssrr::SparseSymmetric random_tridiagonal(std::size_t n, Gen& g) {
  std::vector<cjssrr::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, g.uniform(-2.0, 2.0)});
    if (i + 1 < n) {
      const double e = g.uniform(0.2, 1.0);
      t.push_back({i, i + 1, e});
      t.push_back({i + 1, i, e});
    }
  }
  return cjssrr::SparseSymmetric::from_triplets(n, std::move(t));
}

}  // namespace oracle
