"""Integration tests for the cjssrr command-line tool."""

import csv
import io
import json
import os
import pathlib
import subprocess

import jsonschema
import numpy as np
import pytest

CLI = os.environ.get("CJSSRR_CLI", "cjssrr")
ROOT = pathlib.Path(os.environ.get("CJSSRR_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
FIX = ROOT / "fixtures"
LAPLACIAN = str(FIX / "laplacian_1000.mtx")
SCHEMA = json.loads((ROOT / "schema" / "report.schema.json").read_text())


def run(*args, check_code=None):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, timeout=900)
    if check_code is not None:
        assert proc.returncode == check_code, proc.stderr
    return proc


def validate(doc):
    jsonschema.validate(doc, SCHEMA)


def test_solve_fixture_validates(tmp_path):
    out = tmp_path / "solve.json"
    run("solve", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--report", out, check_code=0)
    doc = json.loads(out.read_text())
    validate(doc)
    assert doc["converged"]
    assert doc["max_residual"] < doc["config_echo"]["tol"]
    assert doc["n_found"] == 32
    assert sum(h["mv_block"] + h["mv_rr"] for h in doc["history"]) == doc["mv_exact"]


def test_solve_stdout_when_no_report():
    proc = run("solve", "--matrix", FIX / "tridiag_small.mtx", "--a", 1.5, "--b", 2.5, "--spectral-bounds", "0,4",
               check_code=0)
    doc = json.loads(proc.stdout)
    validate(doc)
    assert doc["spectral_range"]["source"] == "supplied"
    assert doc["converged"]


def test_count_validates():
    proc = run("count", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--count-samples", 20, check_code=0)
    doc = json.loads(proc.stdout)
    validate(doc)
    assert len(doc["count_estimate"]["per_sample"]) == 20
    assert 20 < doc["count_estimate"]["n_ev_tilde"] < 50


def test_bench_and_baseline_validate(tmp_path):
    out = tmp_path / "bench.json"
    run("bench", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--report", out, check_code=0)
    doc = json.loads(out.read_text())
    validate(doc)
    assert doc["speedup_mv"] >= 2.0
    cj = [p["value"] for p in doc["cj"]["ritz"]]
    bl = [p["value"] for p in doc["baseline"]["ritz"]]
    assert len(cj) == len(bl)
    assert np.max(np.abs(np.array(cj) - np.array(bl))) <= 1e-9
    assert len(doc["baseline"]["shift_stats"]) == 8
    validate(doc["baseline"])


def test_malformed_matrix_names_the_line():
    proc = run("solve", "--matrix", FIX / "malformed.mtx", "--a", 1, "--b", 2, check_code=1)
    assert "line 5" in proc.stderr
    assert proc.stderr.count("\n") == 1


@pytest.mark.parametrize(
    "args, code",
    [
        (["solve", "--matrix", "/nonexistent.mtx", "--a", 1, "--b", 2], 1),
        (["solve", "--matrix", LAPLACIAN, "--a", 3, "--b", 1], 1),
        (["solve", "--matrix", LAPLACIAN], 1),
        (["solve", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--basis", "legendre"], 1),
        (["frobnicate"], 1),
        (["solve", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--spectral-bounds", "1.8,2.2", "--degree", 2000], 3),
    ],
)
def test_error_exit_codes(args, code):
    proc = run(*args)
    assert proc.returncode == code, proc.stderr
    assert proc.stderr.startswith("error")


def test_unreachable_tolerance_exits_two(tmp_path):
    out = tmp_path / "u.json"
    run("solve", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--tol", 1e-30, "--max-restarts", 2, "--report", out,
        check_code=2)
    doc = json.loads(out.read_text())
    validate(doc)
    assert not doc["converged"]
    assert doc["restarts"] == 2


def test_reports_are_deterministic(tmp_path):
    texts = []
    for name in ("x.json", "y.json"):
        out = tmp_path / name
        run("solve", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--seed", 5, "--report", out, check_code=0)
        texts.append("\n".join(l for l in out.read_text().splitlines() if '"wall_time_s"' not in l))
    assert texts[0] == texts[1]


def test_probe_csv_refit():
    proc = run("probe", "--p-degree", 0, "--points", 0.1, -0.6, "--d-min", 100, "--d-max", 10000, "--num-degrees", 12,
               check_code=0)
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    assert set(rows[0]) == {"d", "t", "p_degree", "error", "bound_kind", "bound"}
    for r in rows:
        assert float(r["error"]) <= float(r["bound"])
    for t in ("0.1", "-0.6"):
        sel = [r for r in rows if float(r["t"]) == float(t)]
        d = np.array([float(r["d"]) for r in sel])
        e = np.array([float(r["error"]) for r in sel])
        slope = np.polyfit(np.log(d), np.log(e), 1)[0]
        assert abs(slope + 3.0) <= 0.3


def test_conditioning_csv(tmp_path):
    out = tmp_path / "c.csv"
    run("conditioning", "--matrix", LAPLACIAN, "--a", 1.9, "--b", 2.1, "--moments", "8,16", "--subspace-dim", 64,
        "--report", out, check_code=0)
    rows = list(csv.DictReader(out.open()))
    by = {(r["basis"], int(r["M"])): r for r in rows}
    assert float(by[("monomial", 8)]["kappa"]) >= 1e4 * float(by[("chebyshev", 8)]["kappa"])
    assert int(by[("monomial", 16)]["rank"]) < 64
    assert int(by[("chebyshev", 16)]["rank"]) == 64
