"""Smoke tests for the Python extension module."""

import os
import pathlib

import numpy as np
import pytest

cjssrr = pytest.importorskip("cjssrr")

ROOT = pathlib.Path(os.environ.get("CJSSRR_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def test_degree_table():
    assert [cjssrr.select_degree(0.100008, m, 1.0, 10.0) for m in (1, 2, 4, 8, 16)] == [211, 212, 220, 259, 433]


def test_jackson_and_kernel():
    rho = cjssrr.jackson_factors(2)
    assert rho[0] == pytest.approx(1.0)
    assert rho[2] == pytest.approx(0.25)
    assert cjssrr.kernel_moment(50, 0) == pytest.approx(1.0, abs=1e-10)
    assert cjssrr.kernel_moment(50, 4) <= cjssrr.kernel_moment_bound(50, 4)


def test_filter_values_shape_and_range():
    t = np.linspace(-1, 1, 101)
    f = cjssrr.filter_values(-0.2, 0.4, 200, 2, t)
    assert f.shape == (2, 101)
    assert f[0].min() >= -1e-12
    assert f[0].max() <= 1 + 1e-12


def test_matrix_roundtrip():
    a = cjssrr.SparseMatrix.laplacian_1d(5)
    d = a.to_dense()
    assert d.shape == (5, 5)
    assert np.allclose(d, 2 * np.eye(5) - np.eye(5, k=1) - np.eye(5, k=-1))
    x = np.arange(5.0).reshape(5, 1)
    assert np.allclose(a.matvec(x), d @ x)
    b = cjssrr.SparseMatrix.from_dense(d)
    assert b.nnz == a.nnz


def test_solve_matches_dense_eigenvalues():
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((120, 120)))
    eig = np.linspace(-1, 1, 120)
    dense = (q * eig) @ q.T
    dense = 0.5 * (dense + dense.T)
    a = cjssrr.SparseMatrix.from_dense(dense)
    rep = cjssrr.solve(a, -0.2, 0.2, M=4, seed=3)
    truth = np.linalg.eigvalsh(dense)
    truth = truth[(truth >= -0.2) & (truth <= 0.2)]
    vals = np.array([p["value"] for p in rep["ritz"]])
    assert rep["converged"]
    assert vals.shape == truth.shape
    assert np.max(np.abs(vals - truth)) < 1e-10


def test_count_and_errors():
    a = cjssrr.SparseMatrix.read_matrix_market(str(ROOT / "fixtures" / "laplacian_1000.mtx"))
    est = cjssrr.count(a, 1.9, 2.1, samples=10)
    assert len(est["per_sample"]) == 10
    with pytest.raises(cjssrr.Error, match="line 5"):
        cjssrr.SparseMatrix.read_matrix_market(str(ROOT / "fixtures" / "malformed.mtx"))
    with pytest.raises(cjssrr.Error):
        cjssrr.solve(a, 2.1, 1.9)
