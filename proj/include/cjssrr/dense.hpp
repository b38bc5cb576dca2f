#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace cjssrr {

/// Column-major dense real matrix. Used for blocks of vectors (n x l) and for
/// the small projected problems.
class DenseBlock {
 public:
  DenseBlock() = default;
  DenseBlock(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static DenseBlock identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  /// Columns [first, first + count).
  DenseBlock columns(std::size_t first, std::size_t count) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

DenseBlock transpose(const DenseBlock& a);
/// a * b
DenseBlock multiply(const DenseBlock& a, const DenseBlock& b);
/// a^T * b
DenseBlock multiply_at_b(const DenseBlock& a, const DenseBlock& b);

double frobenius_norm(const DenseBlock& a);
double max_abs(const DenseBlock& a);
/// max_ij |a_ij - b_ij|; dimensions must agree.
double max_abs_diff(const DenseBlock& a, const DenseBlock& b);

struct QrResult {
  DenseBlock q;  // rows x cols, orthonormal columns
  DenseBlock r;  // cols x cols, upper triangular, nonnegative diagonal
};

/// Householder thin QR. Throws RankDeficientError when the block has
/// numerical rank below its column count (threshold 10 ||S|| eps).
QrResult thin_qr(const DenseBlock& s);

/// Householder QR without the rank check.
QrResult householder_qr(const DenseBlock& s);

struct SymEigResult {
  std::vector<double> values;  // ascending
  DenseBlock vectors;          // orthonormal columns
};

/// Full spectrum of a symmetric matrix (Householder tridiagonalisation and
/// implicit QL). Throws on non-square or asymmetric input.
SymEigResult dense_sym_eig(const DenseBlock& b);

/// Eigenvalues and eigenvectors of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (off.size() == diag.size() - 1).
SymEigResult tridiagonal_eig(std::span<const double> diag, std::span<const double> off);

struct SvdResult {
  std::vector<double> values;  // descending
  DenseBlock left;             // rows x cols; columns for zero singular values are unspecified
};

/// Thin SVD via Householder QR followed by one-sided Jacobi on R.
SvdResult thin_svd(const DenseBlock& s, bool want_vectors = false);
std::vector<double> singular_values(const DenseBlock& s);

/// sigma_max / sigma_min; +infinity when sigma_min == 0.
double condition_number(const DenseBlock& s);

/// Number of singular values greater than tol_factor * ||S||_2 * eps.
std::size_t numerical_rank(const DenseBlock& s, double tol_factor = 10.0);

/// Orthonormal basis of the dominant `rank`-dimensional left singular
/// subspace. Used when a moment block is numerically rank deficient.
DenseBlock truncated_basis(const DenseBlock& s, std::size_t rank);

}  // namespace cjssrr
