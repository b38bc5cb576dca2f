#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cjssrr/dense.hpp"
#include "cjssrr/filter.hpp"
#include "cjssrr/sparse.hpp"
#include "cjssrr/spectral.hpp"

namespace cjssrr {

struct RitzSet {
  std::vector<double> values;          // ascending, original units
  DenseBlock vectors;                  // n x m, orthonormal
  std::vector<double> residual_norms;  // |A x - lambda x| / (|A| |x|)
  std::vector<bool> in_interval;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t count_in() const;
  /// Pairs with the given indices, in order.
  RitzSet select(const std::vector<std::size_t>& idx) const;
};

/// Projects A onto span(U) and returns all Ritz pairs. `a_norm` scales the
/// residuals; membership uses the closed interval [iv.a, iv.b]. Charges
/// U.cols() products to `counter`. Throws InvalidArgument when U is not
/// orthonormal to 1e-10.
RitzSet rayleigh_ritz(const SparseSymmetric& a, const DenseBlock& u, double a_norm, const TargetInterval& iv,
                      MvCounter* counter = nullptr);

struct ConvergenceCheck {
  bool converged = false;
  std::size_t count_in = 0;
  std::size_t count_converged = 0;  // in-interval pairs below tol
  double max_residual_in = 0.0;
};

/// Converged when at least n_ev_target in-interval pairs pass the strict
/// residual test and no in-interval pair fails it.
ConvergenceCheck check_convergence(const RitzSet& rs, double tol, std::size_t n_ev_target);

struct MvModel {
  double per_iter_mvs = 0.0;    // (d/M + 1) M ell
  double equivalent_mvs = 0.0;  // ((M + 1) n / nnz) d ell
};

MvModel mv_accounting(std::size_t d, std::size_t M, std::size_t ell, std::size_t n, std::size_t nnz);

struct IterationLog {
  std::size_t iteration = 0;
  std::uint64_t mv_block = 0;
  std::uint64_t mv_rr = 0;
  std::size_t basis_rank = 0;
  std::size_t count_in = 0;
  std::size_t count_converged = 0;
  double max_residual_in = 0.0;
};

struct SolverOptions {
  double tol = 1e-10;
  std::size_t max_restarts = 30;
  std::size_t n_ev_target = 1;
  // When positive, the search basis keeps only singular directions above
  // rank_tol * sigma_max (for blocks whose entries carry solver error).
  double rank_tol = 0.0;
  // Optional independent tally charged by every product the solver performs.
  MvCounter* audit = nullptr;
};

struct SolveReport {
  RitzSet ritz;  // converged in-interval pairs; all in-interval pairs if unconverged
  std::size_t restarts = 0;  // iterations performed
  double max_residual = 0.0;
  std::uint64_t mv_exact = 0;
  double mv_equivalent = 0.0;  // mv_exact plus the modelled non-MV flops
  std::size_t degree = 0;
  std::size_t moments = 0;
  std::size_t ell = 0;
  bool converged = false;
  std::vector<IterationLog> history;
  std::vector<std::string> warnings;
};

/// n x ell block of standard normal entries from a seeded generator.
DenseBlock random_normal_block(std::size_t n, std::size_t ell, std::uint64_t seed);

/// Orthonormal basis of span(S); falls back to the dominant singular subspace
/// when S is numerically rank deficient and appends a warning.
DenseBlock orthonormal_basis(const DenseBlock& s, std::vector<std::string>* warnings);

/// Restarted filtered-moment Rayleigh-Ritz iteration. Each iteration builds
/// the moment block from V, orthonormalises it, projects, and tests
/// convergence; the next V is the first ell columns of the block.
SolveReport run_cjssrr(const SparseSymmetric& a, const SpectralTransform& tr, const TargetInterval& iv,
                       const FilterSpec& spec, const DenseBlock& v0, const SolverOptions& opts = {});

/// Shared restart driver: `make_block` maps V to the n x (M ell) search block
/// and reports the products it used.
using BlockBuilder = std::function<DenseBlock(const DenseBlock& v, std::uint64_t& mv_used)>;
SolveReport restarted_rayleigh_ritz(const SparseSymmetric& a, double a_norm, const TargetInterval& iv,
                                    const BlockBuilder& make_block, const DenseBlock& v0, std::size_t moments,
                                    const SolverOptions& opts);

}  // namespace cjssrr
