#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "cjssrr/baseline.hpp"
#include "cjssrr/error.hpp"
#include "cjssrr/estimators.hpp"
#include "oracle.hpp"

using namespace cjssrr;

TEST_CASE("trapezoid rule on the circle") {
  const auto rule = trapezoid_rule(1.9, 2.1, 16);
  CHECK(rule.nodes.size() == 16);
  CHECK(rule.center == doctest::Approx(2.0));
  CHECK(rule.radius == doctest::Approx(0.1));
  for (const auto& z : rule.nodes) {
    CHECK(std::abs(std::abs(z - rule.center) - rule.radius) <= 1e-14);
    CHECK(z.imag() != 0.0);
  }
  // upper half first, then the conjugates
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(rule.nodes[j].imag() > 0.0);
    CHECK(std::abs(rule.nodes[15 - j] - std::conj(rule.nodes[j])) <= 1e-14);
  }
  cplx at_center = 0.0, outside = 0.0, first = 0.0;
  for (std::size_t j = 0; j < 16; ++j) {
    at_center += rule.weights[j] / (rule.nodes[j] - 2.0);
    outside += rule.weights[j] / (rule.nodes[j] - 3.0);
    first += rule.weights[j] * ((rule.nodes[j] - 2.0) / 0.1) / (rule.nodes[j] - 2.03);
  }
  CHECK(std::abs(at_center - 1.0) <= 1e-14);
  CHECK(std::abs(outside) <= 1e-10);
  CHECK(std::abs(first - 0.3) <= 1e-8);  // rational filter error near 0.3^15
  CHECK_THROWS_AS(trapezoid_rule(1.0, 2.0, 7), Error);
  CHECK_THROWS_AS(trapezoid_rule(2.0, 1.0, 8), Error);
}

TEST_CASE("shifted solve: identity operator") {
  const std::vector<double> ones(50, 1.0);
  const auto a = SparseSymmetric::diagonal(ones);
  oracle::Gen g(83);
  const DenseBlock b = g.normal_block(50, 2);
  const cplx z(2.0, 1.0);
  const auto r = shifted_krylov_solve(a, z, b, 1e-14);
  CHECK(r.stats.converged);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < 50; ++i) CHECK(std::abs(r.x(i, c) - b(i, c) / cplx(1.0, 1.0)) <= 1e-14);
  CHECK_THROWS_AS(shifted_krylov_solve(a, cplx(2.0, 0.0), b, 1e-10), Error);
}

TEST_CASE("shifted solve agrees with a dense complex solve") {
  oracle::Gen g(89);
  const std::size_t n = 100;
  const DenseBlock d = g.symmetric(n);
  const auto a = SparseSymmetric::from_dense(d);
  const DenseBlock b = g.normal_block(n, 3);
  const Eigen::MatrixXcd ad = oracle::to_eigen(d).cast<cplx>();
  const Eigen::MatrixXcd bd = oracle::to_eigen(b).cast<cplx>();
  for (int trial = 0; trial < 4; ++trial) {
    const cplx z(g.uniform(-2.0, 2.0), g.uniform(0.05, 1.0));
    const double tol = 1e-10;
    MvCounter counter;
    const auto r = shifted_krylov_solve(a, z, b, tol, 20000, &counter);
    CHECK(r.stats.converged);
    CHECK(r.stats.final_relres <= tol);
    CHECK(counter.value() == r.stats.mv_count);
    const Eigen::MatrixXcd m = z * Eigen::MatrixXcd::Identity(n, n) - ad;
    const Eigen::MatrixXcd ref = m.partialPivLu().solve(bd);
    const auto lu = dense_shifted_solve(a, z, b);
    for (std::size_t c = 0; c < 3; ++c) {
      double err = 0.0, err_lu = 0.0, nrm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx e = ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        err += std::norm(r.x(i, c) - e);
        err_lu += std::norm(lu(i, c) - e);
        nrm += std::norm(e);
      }
      // forward error is at most cond times the residual; the shift keeps cond modest
      const double cond = oracle::to_eigen(d).norm() / z.imag();
      CHECK(std::sqrt(err / nrm) <= 10.0 * tol * cond);
      CHECK(std::sqrt(err_lu / nrm) <= 1e-12);
    }
  }
}

TEST_CASE("interior shifts need more iterations than extreme ones") {
  const auto a = SparseSymmetric::laplacian_1d(400);
  oracle::Gen g(97);
  const DenseBlock b = g.normal_block(400, 1);
  const auto interior = shifted_krylov_solve(a, cplx(2.0, 0.01), b, 1e-10);
  const auto extreme = shifted_krylov_solve(a, cplx(5.0, 0.01), b, 1e-10);
  CHECK(interior.stats.converged);
  CHECK(extreme.stats.converged);
  CHECK(interior.stats.iterations > extreme.stats.iterations);
}

TEST_CASE("conjugate half assembly equals the full sum") {
  oracle::Gen g(101);
  const std::size_t n = 40, ell = 2, M = 3;
  const DenseBlock d = g.symmetric(n);
  const auto a = SparseSymmetric::from_dense(d);
  const auto rule = trapezoid_rule(-0.5, 0.7, 12);
  const DenseBlock v = g.normal_block(n, ell);
  BaselineOptions opts;
  opts.dense_solves = true;
  std::uint64_t used = 7;
  const DenseBlock s = contour_moment_block(a, rule, M, v, opts, used, nullptr);
  CHECK(used == 0);
  DenseBlock full(n, M * ell);
  for (std::size_t j = 0; j < rule.q; ++j) {
    const auto x = dense_shifted_solve(a, rule.nodes[j], v);
    cplx coef = rule.weights[j];
    const cplx unit = (rule.nodes[j] - rule.center) / rule.radius;
    for (std::size_t k = 0; k < M; ++k, coef *= unit)
      for (std::size_t c = 0; c < ell; ++c)
        for (std::size_t i = 0; i < n; ++i) {
          const cplx t = coef * x(i, c);
          full(i, k * ell + c) += t.real();
          CHECK(std::isfinite(t.imag()));
        }
  }
  CHECK(oracle::relative_error(s, full) <= 1e-12);
}

TEST_CASE("rational filter on a diagonal matrix") {
  const auto diag = oracle::linspace(-1.0, 1.0, 201);
  const auto a = SparseSymmetric::diagonal(diag);
  const auto rule = trapezoid_rule(-0.2, 0.2, 16);
  DenseBlock v(201, 1);
  for (std::size_t i = 0; i < 201; ++i) v(i, 0) = 1.0;
  BaselineOptions opts;
  opts.krylov_tol = 1e-13;
  std::uint64_t used = 0;
  const DenseBlock s = contour_moment_block(a, rule, 1, v, opts, used, nullptr);
  CHECK(used > 0);
  for (std::size_t i = 0; i < 201; ++i) {
    const double rho = std::abs(diag[i]) / 0.2;
    const double ref = 1.0 / (1.0 + std::pow(rho, 16));
    CHECK(std::abs(s(i, 0) - ref) <= 1e-8);
  }
}

TEST_CASE("baseline agrees with the filtered solver") {
  const std::size_t n = 150;
  const auto a = SparseSymmetric::laplacian_1d(n);
  const auto tr = SpectralTransform::from_bounds(0.0, 4.0);
  const auto iv = make_interval(tr, 1.8, 2.2);
  const auto ev = oracle::laplacian_eigenvalues(n);
  std::size_t inside = 0;
  for (double x : ev) inside += (x >= 1.8 && x <= 2.2);
  const std::size_t M = 4, ell = recommended_ell(static_cast<double>(inside), M);
  const DenseBlock v0 = random_normal_block(n, ell, 11);

  const auto cj = run_cjssrr(a, tr, iv, FilterSpec::build(iv, select_degree(iv.width_t(), M).d, M), v0);
  REQUIRE(cj.converged);
  REQUIRE(cj.ritz.size() == inside);

  for (bool dense : {true, false}) {
    MvCounter audit;
    BaselineOptions opts;
    opts.dense_solves = dense;
    opts.solver.audit = &audit;
    const auto bl = run_baseline(a, tr.norm_estimate(), iv, M, v0, opts);
    CHECK(bl.report.converged);
    REQUIRE(bl.report.ritz.size() == inside);
    for (std::size_t i = 0; i < inside; ++i) CHECK(std::abs(bl.report.ritz.values[i] - cj.ritz.values[i]) <= 1e-9);
    CHECK(bl.report.mv_exact == audit.value());
    if (!dense) {
      CHECK(bl.shift_stats.size() == 8);
      std::uint64_t solves = 0;
      for (const auto& st : bl.shift_stats) solves += st.mv_count;
      std::uint64_t rr = 0;
      for (const auto& h : bl.report.history) rr += h.mv_rr;
      CHECK(solves + rr == bl.report.mv_exact);
    }
  }
}
