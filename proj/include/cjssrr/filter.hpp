#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cjssrr/dense.hpp"
#include "cjssrr/sparse.hpp"
#include "cjssrr/spectral.hpp"

namespace cjssrr {

/// Polynomial family p_0..p_{M-1} whose filtered images span the search
/// subspace. All are functions of the mapped variable t in [-1, 1].
enum class BasisKind {
  Monomial,        // t^k
  ScaledMonomial,  // s(t)^k with s mapping [a_t, b_t] onto [-1, 1]
  Chebyshev,       // T_k(s(t))
};

const char* to_string(BasisKind kind);
BasisKind basis_from_string(const std::string& name);

/// Jackson damping factors rho_{0..d, d}.
std::vector<double> jackson_factors(std::size_t d);

/// p_k(t) for the chosen basis on the given interval.
double basis_value(BasisKind basis, const TargetInterval& iv, std::size_t k, double t);

/// T_j(t) for |t| <= 1 by the three-term recurrence.
double chebyshev_t(std::size_t j, double t);

/// Chebyshev coefficients c_0..c_d of p(t) h(t), where h is the indicator of
/// [a_t, b_t]. Evaluated in the angle variable
///   c_j = (2/pi) int_beta^alpha p(cos theta) cos(j theta) dtheta
/// by adaptive Gauss-Kronrod to absolute tolerance `abs_tol`.
std::vector<double> step_coefficients(const TargetInterval& iv, const std::function<double(double)>& p,
                                      std::size_t d, std::size_t poly_degree, double abs_tol = 1e-13);
std::vector<double> step_coefficients(const TargetInterval& iv, BasisKind basis, std::size_t k, std::size_t d,
                                      double abs_tol = 1e-13);

/// Degree, damping and coefficient table of a Chebyshev-Jackson filter.
struct FilterSpec {
  std::size_t degree = 0;
  std::size_t moments = 0;
  BasisKind basis = BasisKind::Chebyshev;
  TargetInterval interval;
  std::vector<double> rho;                  // d + 1 entries
  std::vector<std::vector<double>> coeffs;  // moments x (d + 1)

  static FilterSpec build(const TargetInterval& iv, std::size_t degree, std::size_t moments,
                          BasisKind basis = BasisKind::Chebyshev);
  /// Filter for arbitrary coefficient rows (e.g. a custom polynomial).
  static FilterSpec from_coefficients(const TargetInterval& iv, std::size_t degree,
                                      std::vector<std::vector<double>> coeffs);

  /// Same coefficient rows truncated to a lower degree with that degree's
  /// damping factors.
  FilterSpec truncated(std::size_t degree) const;
};

/// F_d(p_k)(t) for |t| <= 1.
double filter_scalar(const FilterSpec& spec, std::size_t k, double t);

/// The operator l(A) = scale A - shift I applied lazily; products are counted
/// against the original A.
class MappedOperator {
 public:
  MappedOperator(const SparseSymmetric& a, const SpectralTransform& tr, MvCounter* counter = nullptr)
      : a_(&a), scale_(tr.scale()), shift_(tr.shift()), counter_(counter) {}

  std::size_t n() const noexcept { return a_->n(); }
  const SparseSymmetric& matrix() const noexcept { return *a_; }
  MvCounter* counter() const noexcept { return counter_; }

  /// y = l(A) x; counts one product.
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  const SparseSymmetric* a_;
  double scale_;
  double shift_;
  MvCounter* counter_;
};

struct MomentBlock {
  DenseBlock s;  // n x (M l); column block k is F_d(p_k)(l(A)) V
  std::uint64_t mv_count = 0;
  std::size_t moments = 0;
  std::size_t ell = 0;
};

/// One Chebyshev sweep per column of V: d products per column, every moment
/// accumulated in the same sweep. Throws DivergenceError on a non-finite
/// recurrence vector.
MomentBlock build_moment_block(const MappedOperator& op, const DenseBlock& v, const FilterSpec& spec);

}  // namespace cjssrr
