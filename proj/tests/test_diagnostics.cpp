#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cjssrr/diagnostics.hpp"
#include "cjssrr/error.hpp"
#include "oracle.hpp"

using namespace cjssrr;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("kernel values") {
  for (std::size_t d : {2, 7, 40}) {
    const auto rho = jackson_factors(d);
    double s = 0.5;
    for (std::size_t j = 1; j <= d; ++j) s += rho[j];
    CHECK(kernel_value(d, 0.0) == doctest::Approx(s).epsilon(1e-14));
    CHECK(kernel_value(d, 0.0) > 0.0);
  }
  CHECK(kernel_value(2, kPi) == doctest::Approx(0.5 - std::sqrt(2.0) / 2.0 + 0.25).epsilon(1e-14));
  for (std::size_t d : {2, 10, 100}) {
    double lo = 1.0;
    for (std::size_t i = 0; i <= 100000; ++i) lo = std::min(lo, kernel_value(d, -kPi + 2.0 * kPi * i / 100000.0));
    CHECK(lo >= -1e-12);
  }
}

TEST_CASE("kernel moments obey their bounds") {
  for (std::size_t d : {2, 5, 10, 50, 200}) {
    CHECK(std::abs(kernel_moment(d, 0) - 1.0) <= 1e-10);
    for (int k : {1, 2, 4}) CHECK(kernel_moment(d, k) <= kernel_moment_bound(d, k));
  }
  CHECK(kernel_moment(50, 4) <= 1.1 * kernel_fourth_moment_asymptote(50));
  CHECK_THROWS_AS(kernel_moment_bound(10, 3), Error);
}

TEST_CASE("pointwise bounds dominate the error") {
  const auto iv = make_mapped_interval(-0.2, 0.4);
  const std::vector<double> points{-0.95, -0.6, -0.3, -0.2, -0.1, 0.1, 0.3, 0.4, 0.5, 0.9};
  for (std::size_t p : {0, 1, 2}) {
    const auto rows = filter_probe(iv, p, points, {10, 40, 150, 600, 2000});
    for (const auto& r : rows) CHECK(r.error <= r.bound + 1e-12);
  }
  CHECK(pointwise_bound(iv, 0, -0.6, 100).kind == BoundKind::Outside);
  CHECK(pointwise_bound(iv, 0, 0.1, 100).kind == BoundKind::Inside);
  CHECK(pointwise_bound(iv, 0, -0.2, 100).kind == BoundKind::AtA);
  CHECK(pointwise_bound(iv, 0, 0.4, 100).kind == BoundKind::AtB);
  CHECK(std::string(to_string(BoundKind::AtA)) == "at_a");
  CHECK(step_target(iv, 0, -0.2) == 0.5);
  CHECK(step_target(iv, 0, 0.0) == 1.0);
  CHECK(step_target(iv, 0, 0.5) == 0.0);
}

TEST_CASE("probe slopes over two decades") {
  const auto iv = make_mapped_interval(-0.2, 0.4);
  const auto degrees = log_spaced_degrees(100, 10000, 12);
  CHECK(degrees.front() == 100);
  CHECK(degrees.back() == 10000);
  auto slope = [&](std::size_t p, double t) {
    const auto rows = filter_probe(iv, p, {t}, degrees);
    std::vector<double> x, y;
    for (const auto& r : rows) {
      x.push_back(static_cast<double>(r.d) + 2.0);
      y.push_back(r.error);
    }
    return loglog_slope(x, y);
  };
  CHECK(slope(0, 0.1) == doctest::Approx(-3.0).epsilon(0.1));
  CHECK(slope(1, 0.1) == doctest::Approx(-2.0).epsilon(0.15));
  CHECK(slope(1, -0.2) == doctest::Approx(-1.0).epsilon(0.3));
}

TEST_CASE("probe csv layout") {
  const auto iv = make_mapped_interval(-0.2, 0.4);
  std::ostringstream out;
  write_probe_csv(out, filter_probe(iv, 1, {-0.6, 0.1}, {20, 30}));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "d,t,p_degree,error,bound_kind,bound");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("loglog slope of exact power laws") {
  oracle::Gen g(61);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = g.uniform(-4.0, 2.0), c = g.uniform(0.1, 10.0);
    std::vector<double> x, y;
    for (int i = 1; i <= 10; ++i) {
      x.push_back(std::pow(2.0, i));
      y.push_back(c * std::pow(x.back(), p));
    }
    CHECK(loglog_slope(x, y) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("markov constants") {
  CHECK(markov_constant(2, 1) == 1.0);
  CHECK(markov_constant(3, 1) == 4.0);
  CHECK(markov_constant(3, 2) == 4.0);
  CHECK_THROWS_AS(markov_constant(3, 3), Error);
}

TEST_CASE("markov inequalities on random polynomials") {
  oracle::Gen g(67);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t M = g.index(2, 8);
    const double a = g.uniform(-1.0, 0.5), b = a + g.uniform(0.05, 1.0);
    std::vector<double> coef(M);
    for (double& c : coef) c = g.normal();
    // p(t) = sum c_m T_m(s(t)) with derivatives by the differentiated recurrence
    auto eval = [&](double t, double& p, double& dp, double& d2p) {
      const double s = (2.0 * t - a - b) / (b - a), ds = 2.0 / (b - a);
      double t0 = 1, t1 = s, u0 = 0, u1 = 1, w0 = 0, w1 = 0;
      p = coef[0];
      dp = 0;
      d2p = 0;
      if (M > 1) {
        p += coef[1] * t1;
        dp += coef[1] * u1 * ds;
      }
      for (std::size_t m = 2; m < M; ++m) {
        const double t2 = 2 * s * t1 - t0, u2 = 2 * t1 + 2 * s * u1 - u0, w2 = 4 * u1 + 2 * s * w1 - w0;
        p += coef[m] * t2;
        dp += coef[m] * u2 * ds;
        d2p += coef[m] * w2 * ds * ds;
        t0 = t1, t1 = t2, u0 = u1, u1 = u2, w0 = w1, w1 = w2;
      }
    };
    double np = 0, ndp = 0, nd2p = 0;
    for (int i = 0; i <= 4000; ++i) {
      double p, dp, d2p;
      eval(a + (b - a) * i / 4000.0, p, dp, d2p);
      np = std::max(np, std::abs(p));
      ndp = std::max(ndp, std::abs(dp));
      nd2p = std::max(nd2p, std::abs(d2p));
    }
    const double sc = 2.0 / (b - a);
    CHECK(ndp <= sc * markov_constant(M, 1) * np * (1 + 1e-9));
    if (M > 2) CHECK(nd2p <= sc * sc * markov_constant(M, 2) * np * (1 + 1e-9) + 1e-12);
  }
}

TEST_CASE("error bound at eigenvalues") {
  oracle::Gen g(71);
  std::vector<double> eig;
  for (int i = 0; i < 40; ++i) eig.push_back(g.uniform(-0.99, 0.99));
  std::sort(eig.begin(), eig.end());
  const auto iv = make_mapped_interval(-0.3, 0.2);
  const double dm = delta_min(iv, eig);
  CHECK(dm > 0.0);

  const double outside = -0.6;
  const double ref = std::pow(kPi, 6) / (std::pow(dm, 4) * std::pow(502.0, 3));
  CHECK(error_at_eigenvalue_bound(iv, outside, 1, 500, dm) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(error_at_eigenvalue_bound(iv, 0.0, 1, 500, dm) == doctest::Approx(ref).epsilon(1e-12));

  const std::size_t M = 4, d = 500;
  const auto spec = FilterSpec::build(iv, d, M);
  for (double lam : eig) {
    const double b = error_at_eigenvalue_bound(iv, lam, M, d, dm);
    for (std::size_t k = 0; k < M; ++k)
      CHECK(std::abs(filter_scalar(spec, k, lam) - step_target(iv, k, lam)) <= b + 1e-12);
  }
  CHECK_THROWS_AS(error_at_eigenvalue_bound(iv, 0.0, 1, 10, 0.0), Error);
}

TEST_CASE("filter ratios are invariant under scaling of p") {
  const auto iv = make_mapped_interval(-0.3, 0.2);
  const auto base = FilterSpec::build(iv, 300, 3);
  oracle::Gen g(73);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = g.uniform(0.1, 5.0) * (g.uniform() < 0.5 ? -1.0 : 1.0);
    auto rows = base.coeffs;
    for (auto& r : rows)
      for (double& x : r) x *= c;
    const auto scaled = FilterSpec::from_coefficients(iv, 300, rows);
    const double li = g.uniform(-0.3, 0.2), lj = g.uniform(-1.0, 1.0);
    for (std::size_t k = 0; k < 3; ++k) {
      const double r1 = filter_scalar(base, k, lj) / filter_scalar(base, k, li);
      const double r2 = filter_scalar(scaled, k, lj) / filter_scalar(scaled, k, li);
      CHECK(r1 == doctest::Approx(r2).epsilon(1e-13));
    }
  }
}

TEST_CASE("convergence factor bound") {
  // 30 eigenvalues; 8 inside [-0.2, 0.2]
  std::vector<double> eig = oracle::linspace(-0.9, 0.9, 30);
  const auto iv = make_mapped_interval(-0.2, 0.2);
  SpectrumModel sm{eig, iv, 1, 3, 4};

  SUBCASE("tail indices") {
    std::size_t n_in = 0;
    for (double x : eig) n_in += (x >= -0.2 && x <= 0.2);
    sm.ell = n_in;
    sm.i = 2;
    const auto r = convergence_factor_bound(sm, 2000);
    CHECK(r.tail_case);
    CHECK(r.epsilon == 0.0);
    CHECK(r.tau == doctest::Approx(r.kappa));
  }
  SUBCASE("large degree limit") {
    sm.i = 1;
    const auto r = convergence_factor_bound(sm, 1000000);
    CHECK(r.mu == doctest::Approx(r.epsilon).epsilon(1e-3));
    CHECK(r.nu == doctest::Approx(step_target(iv, 0, r.lambda_i)).epsilon(1e-3));
    CHECK(r.active);
    CHECK(r.ratio == doctest::Approx(r.mu / r.nu));
  }
  SUBCASE("hypothesis violations") {
    sm.i = 100;
    CHECK_THROWS_AS(convergence_factor_bound(sm, 100), Error);
    sm.i = 1;
    sm.eigenvalues.push_back(0.2);
    std::sort(sm.eigenvalues.begin(), sm.eigenvalues.end());
    CHECK_THROWS_AS(convergence_factor_bound(sm, 100), Error);
  }
}

TEST_CASE("conditioning grid shape") {
  const auto a = SparseSymmetric::laplacian_1d(300);
  const auto tr = SpectralTransform::from_bounds(0.0, 4.0);
  const auto iv = make_interval(tr, 1.9, 2.1);
  const auto rows = conditioning_grid(a, tr, iv, 200, {1, 2, 4}, {BasisKind::Monomial, BasisKind::Chebyshev}, 16, 1);
  CHECK(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.cols == 16);
    CHECK(r.ell * r.M == 16);
    CHECK(r.rank <= r.cols);
    CHECK(r.kappa >= 1.0);
  }
  std::ostringstream out;
  write_conditioning_csv(out, rows);
  CHECK(out.str().rfind("basis,M,ell,d,kappa,rank,cols\n", 0) == 0);
}
