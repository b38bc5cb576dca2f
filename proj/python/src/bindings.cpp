// Python bindings for the cjssrr core.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cjssrr/diagnostics.hpp"
#include "cjssrr/error.hpp"
#include "cjssrr/estimators.hpp"
#include "cjssrr/filter.hpp"
#include "cjssrr/pipeline.hpp"
#include "cjssrr/report.hpp"
#include "cjssrr/sparse.hpp"

namespace py = pybind11;
using namespace cjssrr;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseBlock to_block(const Array& arr) {
  if (arr.ndim() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a 2-D array");
  const auto r = arr.unchecked<2>();
  DenseBlock out(static_cast<std::size_t>(r.shape(0)), static_cast<std::size_t>(r.shape(1)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    for (py::ssize_t j = 0; j < r.shape(1); ++j) out(i, j) = r(i, j);
  return out;
}

py::array_t<double> to_array(const DenseBlock& b) {
  py::array_t<double> out({b.rows(), b.cols()});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) w(i, j) = b(i, j);
  return out;
}

RunConfig make_config(double a, double b, std::size_t M, std::optional<std::size_t> ell,
                      std::optional<std::size_t> degree, double tol, std::size_t max_restarts, std::uint64_t seed,
                      const std::string& basis, std::optional<std::pair<double, double>> spectral_bounds) {
  RunConfig cfg;
  cfg.a = a;
  cfg.b = b;
  cfg.M = M;
  cfg.ell = ell;
  cfg.degree = degree;
  cfg.tol = tol;
  cfg.max_restarts = max_restarts;
  cfg.seed = seed;
  cfg.basis = basis_from_string(basis);
  cfg.spectral_bounds = spectral_bounds;
  return cfg;
}

py::object as_python(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interval eigensolver with Chebyshev-Jackson moment filtering";

  static py::exception<Error> base_error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<SparseSymmetric>(m, "SparseMatrix")
      .def_static("read_matrix_market", &read_matrix_market, py::arg("path"))
      .def_static("laplacian_1d", &SparseSymmetric::laplacian_1d, py::arg("n"))
      .def_static("diagonal", [](const std::vector<double>& d) { return SparseSymmetric::diagonal(d); }, py::arg("diag"))
      .def_static("from_dense", [](const Array& a) { return SparseSymmetric::from_dense(to_block(a)); }, py::arg("a"))
      .def_property_readonly("n", &SparseSymmetric::n)
      .def_property_readonly("nnz", &SparseSymmetric::nnz)
      .def("to_dense", [](const SparseSymmetric& a) { return to_array(a.to_dense()); })
      .def("matvec", [](const SparseSymmetric& a, const Array& x) { return to_array(matvec(a, to_block(x))); },
           py::arg("x"));

  m.def("jackson_factors", &jackson_factors, py::arg("d"));
  m.def(
      "select_degree", [](double w, std::size_t M, double D, double K) { return select_degree(w, M, D, K).d; },
      py::arg("width"), py::arg("M"), py::arg("D") = 1.0, py::arg("K") = 10.0);
  m.def(
      "filter_values",
      [](double a_t, double b_t, std::size_t d, std::size_t M, const std::vector<double>& t, const std::string& basis) {
        const auto spec = FilterSpec::build(make_mapped_interval(a_t, b_t), d, M, basis_from_string(basis));
        py::array_t<double> out({M, t.size()});
        auto w = out.mutable_unchecked<2>();
        for (std::size_t k = 0; k < M; ++k)
          for (std::size_t i = 0; i < t.size(); ++i) w(k, i) = filter_scalar(spec, k, t[i]);
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("d"), py::arg("M") = 1, py::arg("t"), py::arg("basis") = "chebyshev",
      "Filtered moment functions F_d(p_k)(t) on mapped coordinates, shape (M, len(t)).");
  m.def("kernel_moment", &kernel_moment, py::arg("d"), py::arg("k"));
  m.def("kernel_moment_bound", &kernel_moment_bound, py::arg("d"), py::arg("k"));

  m.def(
      "solve",
      [](const SparseSymmetric& a, double lo, double hi, std::size_t M, std::optional<std::size_t> ell,
         std::optional<std::size_t> degree, double tol, std::size_t max_restarts, std::uint64_t seed,
         const std::string& basis, std::optional<std::pair<double, double>> bounds) {
        const RunConfig cfg = make_config(lo, hi, M, ell, degree, tol, max_restarts, seed, basis, bounds);
        SolveOutcome out;
        {
          py::gil_scoped_release release;
          out = solve(a, cfg);
        }
        return as_python(solve_to_json(out, cfg));
      },
      py::arg("matrix"), py::arg("a"), py::arg("b"), py::arg("M") = 4, py::arg("ell") = py::none(),
      py::arg("degree") = py::none(), py::arg("tol") = 1e-10, py::arg("max_restarts") = 30, py::arg("seed") = 0,
      py::arg("basis") = "chebyshev", py::arg("spectral_bounds") = py::none(),
      "Eigenpairs in [a, b]; returns the JSON report as a dict.");
  m.def(
      "count",
      [](const SparseSymmetric& a, double lo, double hi, std::size_t samples, std::optional<std::size_t> degree,
         std::uint64_t seed, std::optional<std::pair<double, double>> bounds) {
        RunConfig cfg = make_config(lo, hi, 1, std::nullopt, degree, 1e-10, 1, seed, "chebyshev", bounds);
        cfg.count_samples = samples;
        SolveSetup s;
        {
          py::gil_scoped_release release;
          s = prepare(a, cfg);
        }
        return as_python(count_to_json(*s.count));
      },
      py::arg("matrix"), py::arg("a"), py::arg("b"), py::arg("samples") = 50, py::arg("degree") = py::none(),
      py::arg("seed") = 0, py::arg("spectral_bounds") = py::none(), "Stochastic eigenvalue count in [a, b].");
}
