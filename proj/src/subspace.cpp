#include "cjssrr/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cjssrr/error.hpp"

namespace cjssrr {

std::size_t RitzSet::count_in() const {
  return static_cast<std::size_t>(std::count(in_interval.begin(), in_interval.end(), true));
}

RitzSet RitzSet::select(const std::vector<std::size_t>& idx) const {
  RitzSet out;
  out.vectors = DenseBlock(vectors.rows(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    out.values.push_back(values.at(i));
    out.residual_norms.push_back(residual_norms.at(i));
    out.in_interval.push_back(in_interval.at(i));
    std::copy(vectors.col(i).begin(), vectors.col(i).end(), out.vectors.col(k).begin());
  }
  return out;
}

RitzSet rayleigh_ritz(const SparseSymmetric& a, const DenseBlock& u, double a_norm, const TargetInterval& iv,
                      MvCounter* counter) {
  if (u.rows() != a.n()) throw Error(ErrorKind::DimensionMismatch, "rayleigh_ritz: U rows differ from n");
  if (!(a_norm > 0.0)) throw Error(ErrorKind::InvalidArgument, "rayleigh_ritz: norm estimate must be positive");
  const std::size_t m = u.cols();
  const DenseBlock gram = multiply_at_b(u, u);
  if (max_abs_diff(gram, DenseBlock::identity(m)) > 1e-10)
    throw Error(ErrorKind::InvalidArgument, "rayleigh_ritz: basis is not orthonormal");

  const DenseBlock w = matvec(a, u, counter);
  DenseBlock p = multiply_at_b(u, w);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const double s = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = s;
      p(j, i) = s;
    }
  const SymEigResult eig = dense_sym_eig(p);

  RitzSet rs;
  rs.values = eig.values;
  rs.vectors = multiply(u, eig.vectors);
  const DenseBlock wy = multiply(w, eig.vectors);
  rs.residual_norms.resize(m);
  rs.in_interval.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto x = rs.vectors.col(k);
    auto r = wy.col(k);
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = r[i] - rs.values[k] * x[i];
      ss += e * e;
    }
    rs.residual_norms[k] = std::sqrt(ss) / (a_norm * norm2(x));
    rs.in_interval[k] = iv.contains(rs.values[k]);
  }
  return rs;
}

ConvergenceCheck check_convergence(const RitzSet& rs, double tol, std::size_t n_ev_target) {
  ConvergenceCheck c;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (!rs.in_interval[k]) continue;
    ++c.count_in;
    c.max_residual_in = std::max(c.max_residual_in, rs.residual_norms[k]);
    if (rs.residual_norms[k] < tol) ++c.count_converged;
  }
  c.converged = c.count_converged >= n_ev_target && c.count_converged == c.count_in;
  return c;
}

MvModel mv_accounting(std::size_t d, std::size_t M, std::size_t ell, std::size_t n, std::size_t nnz) {
  if (d == 0 || M == 0 || ell == 0 || n == 0 || nnz == 0)
    throw Error(ErrorKind::InvalidArgument, "mv_accounting: arguments must be positive");
  const double dd = static_cast<double>(d), mm = static_cast<double>(M), ll = static_cast<double>(ell);
  MvModel out;
  out.per_iter_mvs = (dd / mm + 1.0) * mm * ll;
  out.equivalent_mvs = (mm + 1.0) * static_cast<double>(n) / static_cast<double>(nnz) * dd * ll;
  return out;
}

DenseBlock random_normal_block(std::size_t n, std::size_t ell, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  DenseBlock v(n, ell);
  for (double& x : v.data()) x = normal(rng);
  return v;
}

DenseBlock orthonormal_basis(const DenseBlock& s, std::vector<std::string>* warnings) {
  try {
    return thin_qr(s).q;
  } catch (const RankDeficientError& e) {
    if (e.rank() == 0) throw;
    if (warnings) warnings->push_back(std::string(e.what()) + "; continuing on the dominant subspace");
    return truncated_basis(s, e.rank());
  }
}

SolveReport restarted_rayleigh_ritz(const SparseSymmetric& a, double a_norm, const TargetInterval& iv,
                                    const BlockBuilder& make_block, const DenseBlock& v0, std::size_t moments,
                                    const SolverOptions& opts) {
  if (v0.rows() != a.n()) throw Error(ErrorKind::DimensionMismatch, "V0 rows differ from n");
  if (v0.cols() == 0) throw Error(ErrorKind::InvalidArgument, "V0 has no columns");
  if (opts.max_restarts == 0) throw Error(ErrorKind::InvalidArgument, "max_restarts must be positive");
  const std::size_t ell = v0.cols();

  SolveReport rep;
  rep.moments = moments;
  rep.ell = ell;
  DenseBlock v = v0;
  RitzSet last;
  ConvergenceCheck check;
  for (std::size_t it = 1; it <= opts.max_restarts; ++it) {
    IterationLog log;
    log.iteration = it;
    std::uint64_t used = 0;
    const DenseBlock s = make_block(v, used);
    log.mv_block = used;

    DenseBlock u;
    if (opts.rank_tol > 0.0) {
      SvdResult svd = thin_svd(s, true);
      std::size_t r = 0;
      while (r < svd.values.size() && svd.values[r] > opts.rank_tol * svd.values[0]) ++r;
      if (r == 0) throw RankDeficientError(0, s.cols());
      u = svd.left.columns(0, r);
    } else {
      u = orthonormal_basis(s, &rep.warnings);
    }
    log.basis_rank = u.cols();
    MvCounter rr;
    last = rayleigh_ritz(a, u, a_norm, iv, &rr);
    log.mv_rr = rr.value();
    if (opts.audit) opts.audit->add(log.mv_rr);
    rep.mv_exact += log.mv_block + log.mv_rr;

    check = check_convergence(last, opts.tol, opts.n_ev_target);
    log.count_in = check.count_in;
    log.count_converged = check.count_converged;
    log.max_residual_in = check.max_residual_in;
    rep.history.push_back(log);
    rep.restarts = it;
    if (check.converged) break;

    v = s.columns(0, ell);
    for (std::size_t j = 0; j < ell; ++j) {
      auto c = v.col(j);
      const double nrm = norm2(c);
      if (nrm > 0.0 && std::isfinite(nrm))
        for (double& x : c) x /= nrm;
    }
  }

  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < last.size(); ++k)
    if (last.in_interval[k] && (!check.converged || last.residual_norms[k] < opts.tol)) keep.push_back(k);
  rep.ritz = last.select(keep);
  rep.converged = check.converged;
  rep.max_residual = check.max_residual_in;
  rep.mv_equivalent = static_cast<double>(rep.mv_exact);
  return rep;
}

SolveReport run_cjssrr(const SparseSymmetric& a, const SpectralTransform& tr, const TargetInterval& iv,
                       const FilterSpec& spec, const DenseBlock& v0, const SolverOptions& opts) {
  const MappedOperator op(a, tr, opts.audit);
  auto builder = [&](const DenseBlock& v, std::uint64_t& used) {
    MomentBlock block = build_moment_block(op, v, spec);
    used = block.mv_count;
    return std::move(block.s);
  };
  SolveReport rep = restarted_rayleigh_ritz(a, tr.norm_estimate(), iv, builder, v0, spec.moments, opts);
  rep.degree = spec.degree;
  const MvModel model = mv_accounting(spec.degree, spec.moments, v0.cols(), a.n(), std::max<std::size_t>(a.nnz(), 1));
  rep.mv_equivalent = static_cast<double>(rep.mv_exact) + static_cast<double>(rep.restarts) * model.equivalent_mvs;
  return rep;
}

}  // namespace cjssrr
