#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cjssrr/dense.hpp"

namespace cjssrr {

/// Tally of sparse matrix-vector products. One increment per column.
class MvCounter {
 public:
  void add(std::uint64_t n) noexcept { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const noexcept { return count_.load(std::memory_order_relaxed); }
  void reset() noexcept { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Real symmetric matrix in CSR form with both triangles stored.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  /// Builds from full (both-triangle) triplets; duplicates are summed. Throws
  /// NotSymmetric when (i,j) and (j,i) disagree beyond 1e-12 relative.
  static SparseSymmetric from_triplets(std::size_t n, std::vector<Triplet> entries);
  static SparseSymmetric diagonal(std::span<const double> diag);
  static SparseSymmetric from_dense(const DenseBlock& dense, double drop_tol = 0.0);
  /// tridiag(-1, 2, -1) of order n.
  static SparseSymmetric laplacian_1d(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }

  DenseBlock to_dense() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

SparseSymmetric parse_matrix_market(std::istream& in);
SparseSymmetric read_matrix_market(const std::string& path);
/// Writes the lower triangle with `symmetric` storage and full precision.
void write_matrix_market(std::ostream& out, const SparseSymmetric& a);

/// y = A x. Increments `counter` by one when given.
std::vector<double> matvec(const SparseSymmetric& a, std::span<const double> x, MvCounter* counter = nullptr);
void matvec(const SparseSymmetric& a, std::span<const double> x, std::span<double> y);

/// Y = A X column by column; counts X.cols() products.
DenseBlock matvec(const SparseSymmetric& a, const DenseBlock& x, MvCounter* counter = nullptr);

}  // namespace cjssrr
