#include "cjssrr/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cjssrr/error.hpp"

namespace cjssrr {

DenseBlock DenseBlock::identity(std::size_t n) {
  DenseBlock out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseBlock DenseBlock::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) {
    throw Error(ErrorKind::DimensionMismatch, "column range exceeds block width");
  }
  DenseBlock out(rows_, count);
  std::copy(data_.begin() + static_cast<std::ptrdiff_t>(first * rows_),
            data_.begin() + static_cast<std::ptrdiff_t>((first + count) * rows_),
            out.data_.begin());
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) {
  // scaled accumulation keeps tiny and huge vectors finite
  double scale = 0.0, ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

DenseBlock transpose(const DenseBlock& a) {
  DenseBlock out(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = a(i, j);
  return out;
}

DenseBlock multiply(const DenseBlock& a, const DenseBlock& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "multiply: inner dimensions differ");
  DenseBlock c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      auto ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

DenseBlock multiply_at_b(const DenseBlock& a, const DenseBlock& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "multiply_at_b: row counts differ");
  DenseBlock c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

double frobenius_norm(const DenseBlock& a) { return norm2(a.data()); }

double max_abs(const DenseBlock& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const DenseBlock& a, const DenseBlock& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "max_abs_diff: shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

QrResult householder_qr(const DenseBlock& s) {
  const std::size_t m = s.rows(), k = s.cols();
  if (m < k) throw Error(ErrorKind::DimensionMismatch, "thin_qr requires rows >= cols");

  DenseBlock work = s;
  std::vector<std::vector<double>> reflectors(k);
  std::vector<double> r_diag(k, 0.0);

  for (std::size_t j = 0; j < k; ++j) {
    auto x = work.col(j).subspan(j);
    const double xnorm = norm2(x);
    std::vector<double> v(x.begin(), x.end());
    if (xnorm == 0.0) {
      r_diag[j] = 0.0;
      continue;
    }
    const double alpha = x[0] > 0.0 ? -xnorm : xnorm;
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) {
      r_diag[j] = alpha;
      continue;
    }
    for (double& vi : v) vi /= vnorm;
    for (std::size_t c = j; c < k; ++c) {
      auto col = work.col(c).subspan(j);
      const double proj = 2.0 * dot(v, col);
      for (std::size_t i = 0; i < v.size(); ++i) col[i] -= proj * v[i];
    }
    r_diag[j] = work(j, j);
    reflectors[j] = std::move(v);
  }

  QrResult out{DenseBlock(m, k), DenseBlock(k, k)};
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < j; ++i) out.r(i, j) = work(i, j);
  for (std::size_t j = 0; j < k; ++j) out.r(j, j) = r_diag[j];

  for (std::size_t j = 0; j < k; ++j) out.q(j, j) = 1.0;
  for (std::size_t jj = k; jj-- > 0;) {
    const auto& v = reflectors[jj];
    if (v.empty()) continue;
    for (std::size_t c = jj; c < k; ++c) {
      auto col = out.q.col(c).subspan(jj);
      const double proj = 2.0 * dot(v, col);
      for (std::size_t i = 0; i < v.size(); ++i) col[i] -= proj * v[i];
    }
  }

  for (std::size_t j = 0; j < k; ++j) {
    if (out.r(j, j) < 0.0) {
      for (std::size_t c = j; c < k; ++c) out.r(j, c) = -out.r(j, c);
      for (double& qi : out.q.col(j)) qi = -qi;
    }
  }
  return out;
}

namespace {

// One-sided Jacobi on the columns of a square (or tall) matrix. On return the
// columns of `u` are mutually orthogonal; their norms are the singular values.
void one_sided_jacobi(DenseBlock& u) {
  const std::size_t k = u.cols();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        auto up = u.col(p), uq = u.col(q);
        const double alpha = dot(up, up), beta = dot(uq, uq), gamma = dot(up, uq);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= kMachineEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), sn = c * t;
        for (std::size_t i = 0; i < u.rows(); ++i) {
          const double a = up[i], b = uq[i];
          up[i] = c * a - sn * b;
          uq[i] = sn * a + c * b;
        }
      }
    }
    if (!rotated) return;
  }
}

}  // namespace

SvdResult thin_svd(const DenseBlock& s, bool want_vectors) {
  const std::size_t k = s.cols();
  QrResult qr = householder_qr(s);
  DenseBlock w = qr.r;
  one_sided_jacobi(w);

  std::vector<double> sv(k);
  for (std::size_t j = 0; j < k; ++j) sv[j] = norm2(w.col(j));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

  SvdResult out;
  out.values.resize(k);
  for (std::size_t j = 0; j < k; ++j) out.values[j] = sv[order[j]];
  if (!want_vectors) return out;

  DenseBlock wn(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    if (sv[src] == 0.0) continue;
    for (std::size_t i = 0; i < k; ++i) wn(i, j) = w(i, src) / sv[src];
  }
  out.left = multiply(qr.q, wn);
  return out;
}

std::vector<double> singular_values(const DenseBlock& s) { return thin_svd(s, false).values; }

double condition_number(const DenseBlock& s) {
  auto sv = singular_values(s);
  if (sv.empty()) return 1.0;
  if (sv.back() == 0.0) return std::numeric_limits<double>::infinity();
  return sv.front() / sv.back();
}

namespace {
std::size_t rank_from_values(const std::vector<double>& sv, double tol_factor) {
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double tol = tol_factor * sv.front() * kMachineEps;
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double v) { return v > tol; }));
}
}  // namespace

std::size_t numerical_rank(const DenseBlock& s, double tol_factor) {
  return rank_from_values(singular_values(s), tol_factor);
}

QrResult thin_qr(const DenseBlock& s) {
  QrResult qr = householder_qr(s);
  DenseBlock w = qr.r;
  one_sided_jacobi(w);
  std::vector<double> sv(w.cols());
  for (std::size_t j = 0; j < w.cols(); ++j) sv[j] = norm2(w.col(j));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  const std::size_t rank = rank_from_values(sv, 10.0);
  if (rank < s.cols()) throw RankDeficientError(rank, s.cols());
  return qr;
}

DenseBlock truncated_basis(const DenseBlock& s, std::size_t rank) {
  SvdResult svd = thin_svd(s, true);
  return svd.left.columns(0, std::min(rank, s.cols()));
}

namespace {

// Implicit QL on a symmetric tridiagonal matrix; `v` accumulates the
// transformations. d: diagonal, e: subdiagonal stored in e[1..n-1].
void tql2(std::vector<double>& d, std::vector<double>& e, DenseBlock& v) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0, tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kMachineEps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw Error(ErrorKind::Divergence, "tridiagonal QL failed to converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          auto vi = v.col(i), vi1 = v.col(i + 1);
          for (std::size_t k = 0; k < v.rows(); ++k) {
            h = vi1[k];
            vi1[k] = s * vi[k] + c * h;
            vi[k] = c * vi[k] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kMachineEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Householder reduction of symmetric `v` to tridiagonal form; on return `v`
// holds the orthogonal transformation, d/e the tridiagonal.
void tred2(DenseBlock& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

SymEigResult sorted(std::vector<double> d, const DenseBlock& v) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  SymEigResult out;
  out.values.resize(n);
  out.vectors = DenseBlock(v.rows(), n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    auto src = v.col(order[j]);
    std::copy(src.begin(), src.end(), out.vectors.col(j).begin());
  }
  return out;
}

}  // namespace

SymEigResult dense_sym_eig(const DenseBlock& b) {
  const std::size_t n = b.rows();
  if (b.cols() != n) throw Error(ErrorKind::DimensionMismatch, "dense_sym_eig: matrix not square");
  if (n == 0) return {};
  double asym = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) asym = std::max(asym, std::abs(b(i, j) - b(j, i)));
  if (asym > 1e-12 * std::max(frobenius_norm(b), 1e-300))
    throw Error(ErrorKind::NotSymmetric, "dense_sym_eig: matrix is not symmetric");

  DenseBlock v = b;
  std::vector<double> d(n), e(n);
  tred2(v, d, e);
  tql2(d, e, v);
  return sorted(std::move(d), v);
}

SymEigResult tridiagonal_eig(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw Error(ErrorKind::DimensionMismatch, "tridiagonal_eig: off-diagonal length");
  std::vector<double> d(diag.begin(), diag.end()), e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = off[i - 1];
  DenseBlock v = DenseBlock::identity(n);
  tql2(d, e, v);
  return sorted(std::move(d), v);
}

}  // namespace cjssrr
