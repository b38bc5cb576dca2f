#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cjssrr/dense.hpp"
#include "cjssrr/sparse.hpp"
#include "cjssrr/spectral.hpp"
#include "cjssrr/subspace.hpp"

namespace cjssrr {

using cplx = std::complex<double>;

/// q-point trapezoid rule on the circle through a and b, at midpoint angles
/// (2j - 1) pi / q so no node is real. sum_j w_j f(z_j) approximates
/// (1 / 2 pi i) times the contour integral of f.
struct QuadratureRule {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  std::size_t q = 0;
  double center = 0.0;
  double radius = 0.0;
};

QuadratureRule trapezoid_rule(double a, double b, std::size_t q);

/// Column-major complex block.
class ComplexBlock {
 public:
  ComplexBlock() = default;
  ComplexBlock(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  cplx operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  std::span<cplx> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const cplx> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

struct ShiftedSolveStats {
  cplx shift;
  std::uint64_t mv_count = 0;   // one per product with A, including the final residual check
  std::size_t iterations = 0;   // largest per-column iteration count
  double final_relres = 0.0;    // largest true relative residual over columns
  bool converged = true;
};

struct ShiftedSolveResult {
  ComplexBlock x;
  ShiftedSolveStats stats;
};

/// Solves (z I - A) X = B column by column with a minimal-residual method on
/// the real Lanczos basis of A (the shift only alters the projected
/// tridiagonal). Stops at relative residual <= tol or after maxit steps.
/// Non-convergence is reported in the stats, not thrown.
ShiftedSolveResult shifted_krylov_solve(const SparseSymmetric& a, cplx z, const DenseBlock& b, double tol,
                                        std::size_t maxit = 20000, MvCounter* counter = nullptr);

/// Dense LU solve of (z I - A) X = B; reference solver for small problems.
ComplexBlock dense_shifted_solve(const SparseSymmetric& a, cplx z, const DenseBlock& b);

struct BaselineOptions {
  std::size_t q = 16;
  double krylov_tol = 1e-12;
  std::size_t krylov_maxit = 20000;
  bool dense_solves = false;
  SolverOptions solver;
};

struct BaselineReport {
  SolveReport report;
  std::vector<ShiftedSolveStats> shift_stats;  // per upper-half node, accumulated over iterations
};

/// Moment block S_k = sum_j 2 Re(w_j ((z_j - c) / r)^k X_j), X_j solving
/// the shifted system at the q/2 upper-half nodes.
DenseBlock contour_moment_block(const SparseSymmetric& a, const QuadratureRule& rule, std::size_t moments,
                                const DenseBlock& v, const BaselineOptions& opts, std::uint64_t& mv_used,
                                std::vector<ShiftedSolveStats>* stats);

/// Contour-integral block Rayleigh-Ritz with the same restart and
/// convergence rules as run_cjssrr.
BaselineReport run_baseline(const SparseSymmetric& a, double a_norm, const TargetInterval& iv, std::size_t moments,
                            const DenseBlock& v0, const BaselineOptions& opts = {});

}  // namespace cjssrr
