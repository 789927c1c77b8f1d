"""Command-line surface: formats, cache behavior, exit codes."""

import json
import subprocess
import sys

import pytest

from dynatomic.cli import main


def run_cli(args, tmp_path):
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["--cache-dir", str(tmp_path)] + args)
    return code, buf.getvalue()


def test_poly_phi(tmp_path):
    code, out = run_cli(["poly", "--n", "2", "--m", "2", "--which", "phi"], tmp_path)
    assert code == 0
    assert out.strip() == "x: 1+c 1 1"


def test_poly_delta(tmp_path):
    code, out = run_cli(["poly", "--n", "1", "--which", "delta"], tmp_path)
    assert code == 0
    assert out.strip() == "t: 4c -2 1"


def test_poly_delta_factor_degree(tmp_path):
    code, out = run_cli(["poly", "--n", "5", "--which", "Delta:5"], tmp_path)
    assert code == 0
    assert "degree 11" in out


def test_tables_text_and_json(tmp_path):
    code, out = run_cli(["tables", "--n", "4"], tmp_path)
    assert code == 0
    assert "(4,4)  2^16*3^9" in out
    assert "(1,1)  " in out and "2^8" in out
    code, out = run_cli(["--format", "json", "tables", "--n", "4"], tmp_path)
    data = json.loads(out)
    assert data["(4,4)"]["factors"] == [[2, 16], [3, 9]]


def test_classify_csv(tmp_path):
    code, out = run_cli(["classify", "--n", "5", "-p", "11"], tmp_path)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,m,p,curve,reduction,irreducibility,rules"
    y1 = [l for l in lines if ",Y1," in l][0]
    assert ",good," in y1


def test_graph_dot_and_robustness(tmp_path):
    code, out = run_cli(["graph", "--n", "5", "--robustness", "2"], tmp_path)
    assert code == 0
    assert out.count("style=solid") == 11
    assert out.count("style=dashed") == 3
    assert "connected under all 2-removals" in out


def test_fibers_csv(tmp_path):
    code, out = run_cli(["fibers", "--rows", "5:31"], tmp_path)
    assert code == 0
    row = out.strip().splitlines()[1]
    cells = row.split(",")
    assert cells[0] == "5" and cells[1] == "31"
    assert "6" in cells and "good" in row


def test_budget_exit_code(tmp_path):
    code, out = run_cli(
        ["--budget", "100", "tables", "--n", "6"], tmp_path
    )
    assert code == 2


def test_cache_determinism(tmp_path):
    _, out1 = run_cli(["poly", "--n", "3", "--which", "phi"], tmp_path)
    _, out2 = run_cli(["poly", "--n", "3", "--which", "phi"], tmp_path)
    assert out1 == out2
    assert (tmp_path / "m2" / "n3" / "phi.txt").exists()


def test_module_entrypoint(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "dynatomic.cli", "--cache-dir", str(tmp_path),
         "poly", "--n", "1", "--which", "psi"],
        capture_output=True, text=True,
        env={"PYTHONPATH": "src", "PATH": "/usr/bin:/bin"},
        cwd="/root/pkg",
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "x: c -1 1"
