#include "cjssrr/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cjssrr/error.hpp"
#include "cjssrr/parallel.hpp"

namespace cjssrr {

QuadratureRule trapezoid_rule(double a, double b, std::size_t q) {
  if (q < 4 || q % 2 != 0) throw Error(ErrorKind::InvalidArgument, "trapezoid_rule: q must be even and >= 4");
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "trapezoid_rule: requires a < b");
  QuadratureRule rule;
  rule.q = q;
  rule.center = 0.5 * (a + b);
  rule.radius = 0.5 * (b - a);
  for (std::size_t j = 1; j <= q; ++j) {
    const double theta = static_cast<double>(2 * j - 1) * std::numbers::pi / static_cast<double>(q);
    const cplx e = std::polar(1.0, theta);
    rule.nodes.push_back(rule.center + rule.radius * e);
    rule.weights.push_back(rule.radius * e / static_cast<double>(q));
  }
  return rule;
}

namespace {

struct Rotation {
  double c = 1.0;
  cplx s = 0.0;

  // [c s; -conj(s) c] applied to (x, y)
  void apply(cplx& x, cplx& y) const {
    const cplx nx = c * x + s * y;
    y = -std::conj(s) * x + c * y;
    x = nx;
  }
};

// Rotation zeroing y against x; returns the new leading entry.
cplx make_rotation(cplx x, cplx y, Rotation& g) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (ay == 0.0) {
    g = {1.0, 0.0};
    return x;
  }
  if (ax == 0.0) {
    g = {0.0, 1.0};
    return y;
  }
  const double r = std::hypot(ax, ay);
  const cplx phase = x / ax;
  g = {ax / r, phase * std::conj(y) / r};
  return phase * r;
}

struct ColumnResult {
  std::size_t iterations = 0;
  std::uint64_t mv = 0;
  double relres = 0.0;
  bool converged = false;
};

ColumnResult solve_column(const SparseSymmetric& a, cplx z, std::span<const double> b, std::span<cplx> x, double tol,
                          std::size_t maxit) {
  const std::size_t n = a.n();
  ColumnResult res;
  std::fill(x.begin(), x.end(), cplx(0.0));
  const double beta1 = norm2(b);
  if (beta1 == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<double> v_prev(n, 0.0), v(b.begin(), b.end()), w(n);
  for (double& e : v) e /= beta1;
  std::vector<cplx> d_prev2(n, 0.0), d_prev(n, 0.0), d(n);
  Rotation g2, g1;  // rotations from steps k-2 and k-1
  cplx phi = beta1;  // running rhs entry
  double beta_prev = 0.0;

  for (std::size_t k = 1; k <= maxit; ++k) {
    matvec(a, v, w);
    ++res.mv;
    for (std::size_t i = 0; i < n; ++i) w[i] -= beta_prev * v_prev[i];
    const double alpha = dot(w, v);
    for (std::size_t i = 0; i < n; ++i) w[i] -= alpha * v[i];
    const double beta = norm2(w);

    // column k of the projected matrix z I - T: (-beta_prev, z - alpha, -beta)
    cplx h_m2 = 0.0, h_m1 = -beta_prev, h_0 = z - alpha;
    const cplx h_p1 = -beta;
    g2.apply(h_m2, h_m1);
    g1.apply(h_m1, h_0);
    Rotation g;
    const cplx rkk = make_rotation(h_0, h_p1, g);

    for (std::size_t i = 0; i < n; ++i) d[i] = (v[i] - h_m2 * d_prev2[i] - h_m1 * d_prev[i]) / rkk;
    cplx rhs_next = 0.0;
    cplx rhs_k = phi;
    g.apply(rhs_k, rhs_next);
    for (std::size_t i = 0; i < n; ++i) x[i] += rhs_k * d[i];
    phi = rhs_next;
    res.iterations = k;

    const bool small = std::abs(phi) <= tol * beta1;
    const bool invariant = beta <= static_cast<double>(n) * kMachineEps * (std::abs(alpha) + beta_prev);
    if (small || invariant) break;

    std::swap(d_prev2, d_prev);
    std::swap(d_prev, d);
    g2 = g1;
    g1 = g;
    v_prev.swap(v);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / beta;
    beta_prev = beta;
  }

  // true residual b - (z x - A x)
  std::vector<double> xr(n), xi(n), ar(n), ai(n);
  for (std::size_t i = 0; i < n; ++i) {
    xr[i] = x[i].real();
    xi[i] = x[i].imag();
  }
  matvec(a, xr, ar);
  matvec(a, xi, ai);
  ++res.mv;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx r = b[i] - (z * x[i] - cplx(ar[i], ai[i]));
    ss += std::norm(r);
  }
  res.relres = std::sqrt(ss) / beta1;
  res.converged = res.relres <= tol;
  return res;
}

}  // namespace

ShiftedSolveResult shifted_krylov_solve(const SparseSymmetric& a, cplx z, const DenseBlock& b, double tol,
                                        std::size_t maxit, MvCounter* counter) {
  if (b.rows() != a.n()) throw Error(ErrorKind::DimensionMismatch, "shifted_krylov_solve: B rows differ from n");
  if (z.imag() == 0.0) throw Error(ErrorKind::InvalidArgument, "shifted_krylov_solve: shift must be off the real axis");
  ShiftedSolveResult out;
  out.x = ComplexBlock(a.n(), b.cols());
  out.stats.shift = z;
  std::vector<ColumnResult> cols(b.cols());
  parallel_for(b.cols(), [&](std::size_t j) { cols[j] = solve_column(a, z, b.col(j), out.x.col(j), tol, maxit); });
  for (const auto& c : cols) {
    out.stats.mv_count += c.mv;
    out.stats.iterations = std::max(out.stats.iterations, c.iterations);
    out.stats.final_relres = std::max(out.stats.final_relres, c.relres);
    out.stats.converged = out.stats.converged && c.converged;
  }
  if (counter) counter->add(out.stats.mv_count);
  return out;
}

ComplexBlock dense_shifted_solve(const SparseSymmetric& a, cplx z, const DenseBlock& b) {
  const std::size_t n = a.n();
  if (b.rows() != n) throw Error(ErrorKind::DimensionMismatch, "dense_shifted_solve: B rows differ from n");
  const DenseBlock ad = a.to_dense();
  std::vector<cplx> m(n * n);  // row-major
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = (i == j ? z : cplx(0.0)) - ad(i, j);
  ComplexBlock x(n, b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = b(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    if (std::abs(m[piv * n + k]) == 0.0) throw Error(ErrorKind::InvalidArgument, "dense_shifted_solve: singular system");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      for (std::size_t c = 0; c < b.cols(); ++c) std::swap(x(k, c), x(piv, c));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = m[i * n + k] / m[k * n + k];
      if (f == cplx(0.0)) continue;
      for (std::size_t j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
      for (std::size_t c = 0; c < b.cols(); ++c) x(i, c) -= f * x(k, c);
    }
  }
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t k = n; k-- > 0;) {
      cplx s = x(k, c);
      for (std::size_t j = k + 1; j < n; ++j) s -= m[k * n + j] * x(j, c);
      x(k, c) = s / m[k * n + k];
    }
  return x;
}

DenseBlock contour_moment_block(const SparseSymmetric& a, const QuadratureRule& rule, std::size_t moments,
                                const DenseBlock& v, const BaselineOptions& opts, std::uint64_t& mv_used,
                                std::vector<ShiftedSolveStats>* stats) {
  const std::size_t n = a.n(), ell = v.cols(), half = rule.q / 2;
  if (moments < 1) throw Error(ErrorKind::InvalidArgument, "moment count must be >= 1");
  DenseBlock s(n, moments * ell);
  mv_used = 0;
  if (stats && stats->size() != half) {
    stats->assign(half, {});
    for (std::size_t j = 0; j < half; ++j) stats->at(j).shift = rule.nodes[j];
  }
  for (std::size_t j = 0; j < half; ++j) {
    const cplx z = rule.nodes[j];
    ComplexBlock x;
    if (opts.dense_solves) {
      x = dense_shifted_solve(a, z, v);
    } else {
      ShiftedSolveResult r = shifted_krylov_solve(a, z, v, opts.krylov_tol, opts.krylov_maxit, opts.solver.audit);
      mv_used += r.stats.mv_count;
      if (stats) {
        auto& st = stats->at(j);
        st.mv_count += r.stats.mv_count;
        st.iterations = std::max(st.iterations, r.stats.iterations);
        st.final_relres = std::max(st.final_relres, r.stats.final_relres);
        st.converged = st.converged && r.stats.converged;
      }
      x = std::move(r.x);
    }
    // shifted-scaled moments: powers of (z - c) / r, which lies on the unit circle
    const cplx unit = (z - rule.center) / rule.radius;
    cplx coef = 2.0 * rule.weights[j];
    for (std::size_t k = 0; k < moments; ++k) {
      for (std::size_t c = 0; c < ell; ++c) {
        auto out = s.col(k * ell + c);
        auto xc = x.col(c);
        for (std::size_t i = 0; i < n; ++i) out[i] += (coef * xc[i]).real();
      }
      coef *= unit;
    }
  }
  return s;
}

BaselineReport run_baseline(const SparseSymmetric& a, double a_norm, const TargetInterval& iv, std::size_t moments,
                            const DenseBlock& v0, const BaselineOptions& opts) {
  const QuadratureRule rule = trapezoid_rule(iv.a, iv.b, opts.q);
  BaselineReport out;
  auto builder = [&](const DenseBlock& v, std::uint64_t& used) {
    return contour_moment_block(a, rule, moments, v, opts, used, &out.shift_stats);
  };
  SolverOptions solver = opts.solver;
  // moments are only as accurate as the shifted solves
  if (solver.rank_tol == 0.0) solver.rank_tol = 10.0 * std::max(opts.krylov_tol, kMachineEps);
  out.report = restarted_rayleigh_ritz(a, a_norm, iv, builder, v0, moments, solver);
  for (const auto& st : out.shift_stats)
    if (!st.converged) {
      out.report.warnings.push_back("shifted solve did not reach the Krylov tolerance at one or more nodes");
      break;
    }
  return out;
}

}  // namespace cjssrr
