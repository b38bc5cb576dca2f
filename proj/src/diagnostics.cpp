#include "cjssrr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include "cjssrr/error.hpp"
#include "cjssrr/estimators.hpp"
#include "cjssrr/parallel.hpp"
#include "cjssrr/quadrature.hpp"
#include "cjssrr/subspace.hpp"

namespace cjssrr {

namespace {
constexpr double kPi = std::numbers::pi;
double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}
}  // namespace

double kernel_value(std::size_t d, double phi) {
  const std::vector<double> rho = jackson_factors(d);
  double s = 0.5;
  for (std::size_t j = 1; j <= d; ++j) s += rho[j] * std::cos(static_cast<double>(j) * phi);
  return s;
}

double kernel_moment(std::size_t d, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "kernel_moment: power must be nonnegative");
  const std::vector<double> rho = jackson_factors(d);
  auto f = [&](double phi) {
    double s = 0.5;
    for (std::size_t j = 1; j <= d; ++j) s += rho[j] * std::cos(static_cast<double>(j) * phi);
    return pow_int(phi, k) * s;
  };
  // even integrand: (1/pi) int_{-pi}^{pi} = (2/pi) int_0^pi
  // the cosine sum loses about (d + 1) eps to rounding, scaled by pi^k
  const double tol = std::max(1e-13, 64.0 * static_cast<double>(d + 1) * kMachineEps) * pow_int(kPi, k);
  const auto r = integrate_adaptive(f, 0.0, kPi, tol, d + 1);
  return 2.0 / kPi * r.value;
}

double kernel_moment_bound(std::size_t d, int k) {
  const double dp2 = static_cast<double>(d + 2);
  switch (k) {
    case 0: return 1.0;
    case 1: return kPi * kPi / (2.0 * dp2);
    case 2: return pow_int(kPi, 4) / (4.0 * dp2 * dp2);
    case 4:
      return (0.25 + static_cast<double>(d + 1) * kPi * kPi / (16.0 * dp2 * dp2)) * pow_int(kPi, 6) /
             pow_int(dp2, 3);
    default: throw Error(ErrorKind::InvalidArgument, "kernel_moment_bound: power must be 0, 1, 2 or 4");
  }
}

double kernel_fourth_moment_asymptote(std::size_t d) {
  return pow_int(kPi, 6) / (4.0 * pow_int(static_cast<double>(d + 2), 3));
}

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Outside: return "outside";
    case BoundKind::Inside: return "inside";
    case BoundKind::AtA: return "at_a";
    case BoundKind::AtB: return "at_b";
  }
  return "unknown";
}

ChebyshevNorms chebyshev_norms(const TargetInterval& iv, std::size_t m) {
  const double md = static_cast<double>(m);
  const double scale = 2.0 / iv.width_t();
  ChebyshevNorms n;
  n.p = 1.0;
  n.dp = scale * md * md;
  n.d2p = scale * scale * md * md * (md * md - 1.0) / 3.0;
  return n;
}

namespace {
BoundKind classify(const TargetInterval& iv, double t) {
  if (t == iv.a_t) return BoundKind::AtA;
  if (t == iv.b_t) return BoundKind::AtB;
  return (t > iv.a_t && t < iv.b_t) ? BoundKind::Inside : BoundKind::Outside;
}
}  // namespace

PointBound pointwise_bound(const TargetInterval& iv, std::size_t p_degree, double t, std::size_t d) {
  if (!(std::abs(t) <= 1.0)) throw Error(ErrorKind::InvalidArgument, "pointwise_bound: |t| > 1");
  const ChebyshevNorms nm = chebyshev_norms(iv, p_degree);
  const double dp2 = static_cast<double>(d + 2);
  const double pi6 = pow_int(kPi, 6);
  const double theta = std::acos(t);
  PointBound pb;
  pb.kind = classify(iv, t);
  switch (pb.kind) {
    case BoundKind::Outside: {
      const double dt = std::min(std::abs(theta - iv.alpha), std::abs(theta - iv.beta));
      pb.value = pi6 * nm.p / (2.0 * pow_int(dt, 4) * pow_int(dp2, 3));
      break;
    }
    case BoundKind::Inside: {
      const double dt = std::min(std::abs(theta - iv.alpha), std::abs(theta - iv.beta));
      pb.value = pi6 * nm.p / (pow_int(dt, 4) * pow_int(dp2, 3)) + pow_int(kPi, 4) * (nm.dp + nm.d2p) / (8.0 * dp2 * dp2);
      break;
    }
    case BoundKind::AtA:
    case BoundKind::AtB: {
      const double span = iv.alpha - iv.beta;
      const double da = pb.kind == BoundKind::AtA ? std::min(span, 2.0 * kPi - 2.0 * iv.alpha)
                                                  : std::min(span, 2.0 * iv.beta);
      pb.value = 3.0 * pi6 * nm.p / (4.0 * pow_int(da, 4) * pow_int(dp2, 3)) + kPi * kPi * nm.dp / (4.0 * dp2);
      break;
    }
  }
  return pb;
}

double step_target(const TargetInterval& iv, std::size_t p_degree, double t) {
  const BoundKind k = classify(iv, t);
  if (k == BoundKind::Outside) return 0.0;
  const double p = basis_value(BasisKind::Chebyshev, iv, p_degree, t);
  return k == BoundKind::Inside ? p : 0.5 * p;
}

std::vector<ProbeRow> filter_probe(const TargetInterval& iv, std::size_t p_degree, const std::vector<double>& points,
                                   const std::vector<std::size_t>& degrees) {
  if (degrees.empty() || points.empty()) return {};
  for (double t : points)
    if (!(std::abs(t) <= 1.0)) throw Error(ErrorKind::InvalidArgument, "filter_probe: points must lie in [-1, 1]");
  const std::size_t d_max = *std::max_element(degrees.begin(), degrees.end());
  if (*std::min_element(degrees.begin(), degrees.end()) < 2)
    throw Error(ErrorKind::InvalidArgument, "filter_probe: degrees must be >= 2");
  const std::vector<double> row = step_coefficients(iv, BasisKind::Chebyshev, p_degree, d_max);

  std::vector<ProbeRow> rows(degrees.size() * points.size());
  parallel_for(degrees.size(), [&](std::size_t di) {
    const std::size_t d = degrees[di];
    const FilterSpec spec = FilterSpec::from_coefficients(iv, d, {row});
    for (std::size_t ti = 0; ti < points.size(); ++ti) {
      const double t = points[ti];
      ProbeRow& r = rows[di * points.size() + ti];
      r.d = d;
      r.t = t;
      r.p_degree = p_degree;
      r.error = std::abs(filter_scalar(spec, 0, t) - step_target(iv, p_degree, t));
      const PointBound pb = pointwise_bound(iv, p_degree, t, d);
      r.bound_kind = pb.kind;
      r.bound = pb.value;
    }
  });
  return rows;
}

void write_probe_csv(std::ostream& out, const std::vector<ProbeRow>& rows) {
  out << "d,t,p_degree,error,bound_kind,bound\n";
  out << std::setprecision(17);
  for (const auto& r : rows)
    out << r.d << ',' << r.t << ',' << r.p_degree << ',' << r.error << ',' << to_string(r.bound_kind) << ','
        << r.bound << '\n';
}

std::vector<std::size_t> log_spaced_degrees(std::size_t d_min, std::size_t d_max, std::size_t count) {
  if (d_min < 1 || d_max < d_min) throw Error(ErrorKind::InvalidArgument, "log_spaced_degrees: need 1 <= d_min <= d_max");
  std::set<std::size_t> out;
  if (count < 2 || d_min == d_max) return {d_min, d_max};
  const double l0 = std::log(static_cast<double>(d_min)), l1 = std::log(static_cast<double>(d_max));
  for (std::size_t i = 0; i < count; ++i) {
    const double x = l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.insert(std::clamp(static_cast<std::size_t>(std::llround(std::exp(x))), d_min, d_max));
  }
  return {out.begin(), out.end()};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "loglog_slope: need >= 2 paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "loglog_slope: samples must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double delta_min(const TargetInterval& iv, const std::vector<double>& eigenvalues) {
  double ia = std::numeric_limits<double>::quiet_NaN(), ib = ia, oa = ia, ob = ia;
  for (double l : eigenvalues) {
    if (l >= iv.a_t && l <= iv.b_t) {
      if (std::isnan(ia) || l < ia) ia = l;
      if (std::isnan(ib) || l > ib) ib = l;
    } else if (l < iv.a_t) {
      if (std::isnan(oa) || l > oa) oa = l;
    } else {
      if (std::isnan(ob) || l < ob) ob = l;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double lam, double angle) {
    if (!std::isnan(lam)) best = std::min(best, std::abs(angle - std::acos(std::clamp(lam, -1.0, 1.0))));
  };
  consider(ia, iv.alpha);
  consider(oa, iv.alpha);
  consider(ib, iv.beta);
  consider(ob, iv.beta);
  return best;
}

double error_at_eigenvalue_bound(const TargetInterval& iv, double lambda, std::size_t M, std::size_t d,
                                 double delta_min_value, double p_norm) {
  if (!(std::abs(lambda) <= 1.0)) throw Error(ErrorKind::InvalidArgument, "error_at_eigenvalue_bound: |lambda| > 1");
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "error_at_eigenvalue_bound: M must be >= 1");
  if (!(delta_min_value > 0.0))
    throw Error(ErrorKind::BoundUndefined, "error_at_eigenvalue_bound: an eigenvalue sits exactly at an interval end");
  const double dp2 = static_cast<double>(d + 2);
  const double w = iv.width_t();
  const double m1 = static_cast<double>(M - 1);
  double bound = pow_int(kPi, 6) * p_norm / (pow_int(delta_min_value, 4) * pow_int(dp2, 3));
  const BoundKind k = classify(iv, lambda);
  if (k == BoundKind::Inside)
    bound += pow_int(kPi, 4) * pow_int(m1, 4) * p_norm / (2.0 * w * w * dp2 * dp2);
  else if (k != BoundKind::Outside)
    bound += kPi * kPi * m1 * m1 * p_norm / (2.0 * w * dp2);
  return bound;
}

double markov_constant(std::size_t M, std::size_t k) {
  if (M < 2 || k < 1 || k > M - 1) throw Error(ErrorKind::InvalidArgument, "markov_constant: need 1 <= k <= M - 1");
  const double n2 = static_cast<double>((M - 1) * (M - 1));
  double v = 1.0;
  for (std::size_t m = 0; m < k; ++m) v *= (n2 - static_cast<double>(m * m)) / static_cast<double>(2 * m + 1);
  return v;
}

BoundReport convergence_factor_bound(const SpectrumModel& sm, std::size_t d) {
  const TargetInterval& iv = sm.interval;
  const double a = iv.a_t, b = iv.b_t;
  if (sm.M < 1 || sm.ell < 1) throw Error(ErrorKind::InvalidArgument, "convergence_factor_bound: M and ell must be >= 1");
  std::vector<double> lam;  // descending in-interval eigenvalues
  for (double l : sm.eigenvalues) {
    if (!(std::abs(l) <= 1.0)) throw Error(ErrorKind::InvalidArgument, "convergence_factor_bound: eigenvalues must lie in [-1, 1]");
    if (l >= a && l <= b) lam.push_back(l);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  const std::size_t n_ev = lam.size();
  if (sm.i < 1 || sm.i > n_ev)
    throw Error(ErrorKind::BoundUndefined, "convergence_factor_bound: index i is not an in-interval eigenvalue");
  const std::size_t i = sm.i;
  const double li = lam[i - 1];

  for (std::size_t s = 0; s < n_ev;) {
    std::size_t e = s;
    while (e < n_ev && lam[e] == lam[s]) ++e;
    if (e - s > sm.ell)
      throw Error(ErrorKind::BoundUndefined, "convergence_factor_bound: eigenvalue multiplicity exceeds ell");
    s = e;
  }

  BoundReport r;
  r.lambda_i = li;
  r.delta_min = delta_min(iv, sm.eigenvalues);
  if (!(r.delta_min > 0.0))
    throw Error(ErrorKind::BoundUndefined, "convergence_factor_bound: an eigenvalue sits exactly at an interval end");
  const double dp2 = static_cast<double>(d + 2);
  const bool interior = li > a && li < b;

  if (sm.M == 1) {
    r.tau = 1.0;
    r.gamma_hat = pow_int(kPi, 6) / (pow_int(r.delta_min, 4) * pow_int(dp2, 3));
    r.mu = r.gamma_hat;
    r.nu = (interior ? 1.0 : 0.5) - r.gamma_hat;
  } else {
    if (i > 1 && lam[i - 2] == li)
      throw Error(ErrorKind::BoundUndefined, "convergence_factor_bound: lambda_{i-1} equals lambda_i");
    std::vector<double> xi;
    for (std::size_t j = 0; j + 1 < i; ++j)
      if (xi.empty() || xi.back() != lam[j]) xi.push_back(lam[j]);
    if (xi.size() > sm.M - 1)
      throw Error(ErrorKind::BoundUndefined, "convergence_factor_bound: more than M - 1 distinct eigenvalues precede lambda_i");
    r.xi_count = xi.size();

    auto m_i = [&](double t) {
      double v = 1.0;
      for (double x : xi) v *= t - x;
      return v;
    };
    constexpr std::size_t grid = 20000;
    double sup = 0.0;
    for (std::size_t g = 0; g <= grid; ++g) {
      const double t = a + (b - a) * static_cast<double>(g) / static_cast<double>(grid);
      sup = std::max(sup, std::abs(m_i(t)));
    }
    r.kappa = sup / std::abs(m_i(li));

    r.tail_case = i + sm.ell > n_ev;
    if (r.tail_case) {
      r.epsilon = 0.0;
      r.tau = r.kappa;
    } else {
      const double lil = lam[i + sm.ell - 1];
      if (!(lil > a))
        throw Error(ErrorKind::BoundUndefined, "convergence_factor_bound: lambda_{i+ell} coincides with a");
      const std::size_t deg = sm.M - xi.size() - 1;
      r.sigma = 1.0 + 2.0 * (li - lil) / (lil - a);
      r.epsilon = r.kappa / chebyshev_t_any(deg, r.sigma);
      r.tau = r.epsilon * chebyshev_t_any(deg, 1.0 + 2.0 * (b - lil) / (lil - a));
    }
    const double m1 = static_cast<double>(sm.M - 1);
    const double q = kPi * kPi * m1 * m1 / ((b - a) * dp2);
    r.gamma_hat = pow_int(kPi, 6) * r.tau / (pow_int(r.delta_min, 4) * pow_int(dp2, 3));
    r.delta_hat = q * q * r.tau / 2.0;
    r.eta_hat = q * r.tau / 2.0;
    r.mu = r.gamma_hat + std::max(r.epsilon + r.delta_hat, r.epsilon / 2.0 + r.eta_hat);
    r.nu = interior ? 1.0 - r.gamma_hat - r.delta_hat : 0.5 - r.gamma_hat - r.eta_hat;
  }
  r.active = r.nu > 0.0;
  r.ratio = r.active ? r.mu / r.nu : std::numeric_limits<double>::infinity();
  return r;
}

std::vector<ConditioningRow> conditioning_grid(const SparseSymmetric& a, const SpectralTransform& tr,
                                               const TargetInterval& iv, std::size_t d,
                                               const std::vector<std::size_t>& moments,
                                               const std::vector<BasisKind>& bases, std::size_t subspace_dim,
                                               std::uint64_t seed) {
  std::vector<ConditioningRow> rows;
  const MappedOperator op(a, tr);
  for (std::size_t M : moments) {
    if (M < 1 || subspace_dim < M)
      throw Error(ErrorKind::InvalidArgument, "conditioning_grid: subspace dimension must be at least M");
    const std::size_t ell = subspace_dim / M;
    const DenseBlock v = random_normal_block(a.n(), ell, seed);
    for (BasisKind basis : bases) {
      const FilterSpec spec = FilterSpec::build(iv, d, M, basis);
      const MomentBlock block = build_moment_block(op, v, spec);
      ConditioningRow row;
      row.basis = basis;
      row.M = M;
      row.ell = ell;
      row.d = d;
      row.cols = block.s.cols();
      const std::vector<double> sv = singular_values(block.s);
      row.kappa = sv.back() > 0.0 ? sv.front() / sv.back() : std::numeric_limits<double>::infinity();
      const double thresh = 10.0 * sv.front() * kMachineEps;
      row.rank = static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > thresh; }));
      rows.push_back(row);
    }
  }
  return rows;
}

void write_conditioning_csv(std::ostream& out, const std::vector<ConditioningRow>& rows) {
  out << "basis,M,ell,d,kappa,rank,cols\n";
  out << std::setprecision(6);
  for (const auto& r : rows)
    out << to_string(r.basis) << ',' << r.M << ',' << r.ell << ',' << r.d << ',' << r.kappa << ',' << r.rank << ','
        << r.cols << '\n';
}

}  // namespace cjssrr
