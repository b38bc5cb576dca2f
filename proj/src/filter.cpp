#include "cjssrr/filter.hpp"

#include <cmath>
#include <numbers>

#include "cjssrr/error.hpp"
#include "cjssrr/parallel.hpp"
#include "cjssrr/quadrature.hpp"

namespace cjssrr {

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Monomial: return "monomial";
    case BasisKind::ScaledMonomial: return "scaled";
    case BasisKind::Chebyshev: return "chebyshev";
  }
  return "unknown";
}

BasisKind basis_from_string(const std::string& name) {
  if (name == "monomial") return BasisKind::Monomial;
  if (name == "scaled") return BasisKind::ScaledMonomial;
  if (name == "chebyshev") return BasisKind::Chebyshev;
  throw Error(ErrorKind::InvalidArgument, "unknown basis '" + name + "' (monomial, scaled, chebyshev)");
}

std::vector<double> jackson_factors(std::size_t d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "jackson_factors: degree must be >= 1");
  const double dp2 = static_cast<double>(d + 2);
  const double ad = std::numbers::pi / dp2;
  const double sa = std::sin(ad);
  std::vector<double> rho(d + 1);
  rho[0] = 1.0;
  for (std::size_t j = 1; j <= d; ++j) {
    const double jd = static_cast<double>(j);
    rho[j] = std::sin((jd + 1.0) * ad) / (dp2 * sa) + (1.0 - (jd + 1.0) / dp2) * std::cos(jd * ad);
  }
  return rho;
}

double chebyshev_t(std::size_t j, double t) {
  if (j == 0) return 1.0;
  double t0 = 1.0, t1 = t;
  for (std::size_t i = 1; i < j; ++i) {
    const double t2 = 2.0 * t * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

double basis_value(BasisKind basis, const TargetInterval& iv, std::size_t k, double t) {
  const double s = ((t - iv.a_t) + (t - iv.b_t)) / iv.width_t();
  switch (basis) {
    case BasisKind::Monomial: return std::pow(t, static_cast<double>(k));
    case BasisKind::ScaledMonomial: return std::pow(s, static_cast<double>(k));
    case BasisKind::Chebyshev: return chebyshev_t(k, s);
  }
  return 0.0;
}

std::vector<double> step_coefficients(const TargetInterval& iv, const std::function<double(double)>& p,
                                      std::size_t d, std::size_t poly_degree, double abs_tol) {
  const double span = iv.alpha - iv.beta;
  if (!(span > 0.0)) throw Error(ErrorKind::InvalidArgument, "step_coefficients: empty interval");
  std::vector<double> c(d + 1);
  parallel_for(d + 1, [&](std::size_t j) {
    const double jd = static_cast<double>(j);
    auto integrand = [&](double theta) { return p(std::cos(theta)) * std::cos(jd * theta); };
    // about one panel per half-oscillation of the integrand
    const auto panels =
        static_cast<std::size_t>(std::ceil(static_cast<double>(j + poly_degree) * span / std::numbers::pi)) + 1;
    // 2/pi scaling is applied afterwards, so tighten the tolerance accordingly
    const auto r = integrate_adaptive(integrand, iv.beta, iv.alpha, abs_tol * std::numbers::pi / 2.0, panels);
    c[j] = 2.0 / std::numbers::pi * r.value;
  });
  return c;
}

std::vector<double> step_coefficients(const TargetInterval& iv, BasisKind basis, std::size_t k, std::size_t d,
                                      double abs_tol) {
  return step_coefficients(
      iv, [&](double t) { return basis_value(basis, iv, k, t); }, d, k, abs_tol);
}

FilterSpec FilterSpec::build(const TargetInterval& iv, std::size_t degree, std::size_t moments, BasisKind basis) {
  if (moments < 1) throw Error(ErrorKind::InvalidArgument, "moment count must be >= 1");
  FilterSpec spec;
  spec.degree = degree;
  spec.moments = moments;
  spec.basis = basis;
  spec.interval = iv;
  spec.rho = jackson_factors(degree);
  spec.coeffs.reserve(moments);
  for (std::size_t k = 0; k < moments; ++k) spec.coeffs.push_back(step_coefficients(iv, basis, k, degree));
  return spec;
}

FilterSpec FilterSpec::from_coefficients(const TargetInterval& iv, std::size_t degree,
                                         std::vector<std::vector<double>> coeffs) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "from_coefficients: no coefficient rows");
  for (const auto& row : coeffs)
    if (row.size() < degree + 1)
      throw Error(ErrorKind::DimensionMismatch, "from_coefficients: row shorter than degree + 1");
  FilterSpec spec;
  spec.degree = degree;
  spec.moments = coeffs.size();
  spec.interval = iv;
  spec.rho = jackson_factors(degree);
  spec.coeffs = std::move(coeffs);
  for (auto& row : spec.coeffs) row.resize(degree + 1);
  return spec;
}

FilterSpec FilterSpec::truncated(std::size_t new_degree) const {
  if (new_degree > degree) throw Error(ErrorKind::InvalidArgument, "truncated: degree exceeds the coefficient table");
  FilterSpec out = from_coefficients(interval, new_degree, coeffs);
  out.basis = basis;
  return out;
}

double filter_scalar(const FilterSpec& spec, std::size_t k, double t) {
  if (!(std::abs(t) <= 1.0)) throw Error(ErrorKind::InvalidArgument, "filter_scalar: |t| > 1");
  if (k >= spec.moments) throw Error(ErrorKind::InvalidArgument, "filter_scalar: moment index out of range");
  const auto& c = spec.coeffs[k];
  double sum = 0.5 * c[0];
  if (spec.degree == 0) return sum;
  double t0 = 1.0, t1 = t;
  sum += spec.rho[1] * c[1] * t1;
  for (std::size_t j = 2; j <= spec.degree; ++j) {
    const double t2 = 2.0 * t * t1 - t0;
    t0 = t1;
    t1 = t2;
    sum += spec.rho[j] * c[j] * t1;
  }
  return sum;
}

void MappedOperator::apply(std::span<const double> x, std::span<double> y) const {
  matvec(*a_, x, y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = scale_ * y[i] - shift_ * x[i];
  if (counter_) counter_->add(1);
}

MomentBlock build_moment_block(const MappedOperator& op, const DenseBlock& v, const FilterSpec& spec) {
  const std::size_t n = op.n();
  const std::size_t ell = v.cols();
  const std::size_t m = spec.moments;
  const std::size_t d = spec.degree;
  if (v.rows() != n) throw Error(ErrorKind::DimensionMismatch, "build_moment_block: V rows differ from n");
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "build_moment_block: degree must be >= 1");

  MomentBlock out;
  out.s = DenseBlock(n, m * ell);
  out.moments = m;
  out.ell = ell;

  MvCounter local;

  parallel_for(ell, [&](std::size_t col) {
    std::vector<double> prev(v.col(col).begin(), v.col(col).end());
    std::vector<double> cur(n), next(n);
    for (std::size_t k = 0; k < m; ++k) {
      auto s = out.s.col(k * ell + col);
      const double w = 0.5 * spec.coeffs[k][0];
      for (std::size_t i = 0; i < n; ++i) s[i] = w * prev[i];
    }
    op.apply(prev, cur);
    local.add(1);
    for (std::size_t j = 1; j <= d; ++j) {
      if (j > 1) {
        op.apply(cur, next);
        local.add(1);
        for (std::size_t i = 0; i < n; ++i) next[i] = 2.0 * next[i] - prev[i];
        std::swap(prev, cur);
        std::swap(cur, next);
      }
      bool finite = true;
      for (double x : cur) finite = finite && std::isfinite(x);
      if (!finite) throw DivergenceError(j);
      for (std::size_t k = 0; k < m; ++k) {
        auto s = out.s.col(k * ell + col);
        const double w = spec.rho[j] * spec.coeffs[k][j];
        for (std::size_t i = 0; i < n; ++i) s[i] += w * cur[i];
      }
    }
  });
  out.mv_count = local.value();
  return out;
}

}  // namespace cjssrr
