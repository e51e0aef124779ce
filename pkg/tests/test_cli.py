"""End-to-end runs of the command line front end in a subprocess.

The exit code contract: 0 on success, 1 on usage errors, 2 when the decay
hypothesis fails, 3 when a run ends inconclusive (including failed checks).
"""

import json
import os
import re
import subprocess
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parents[1] / "src"


def run_cli(args, cwd):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    env.setdefault("MPLBACKEND", "Agg")
    return subprocess.run(
        [sys.executable, "-m", "alphamod.cli", *args],
        cwd=cwd, env=env, capture_output=True, text=True, timeout=600,
    )


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def certificate_path(workdir):
    out = workdir / "cert.json"
    res = run_cli(["certify", "--alpha", "0.5", "--window", "bspline:1",
                   "--xi-max", "300", "--tol", "1e-2",
                   "--out", str(out), "--no-plot"], workdir)
    assert res.returncode == 0, res.stderr
    return out


def test_certify_success(certificate_path):
    payload = json.loads(certificate_path.read_text(encoding="utf-8"))
    assert payload["status"] == "certified-numerically"
    assert 0.0 < payload["A_est"] <= payload["B_est"]


def test_certify_writes_plot_by_default(workdir):
    out = workdir / "cert_plot.json"
    res = run_cli(["certify", "--alpha", "0.5", "--window", "bspline:1",
                   "--xi-max", "300", "--tol", "1e-2",
                   "--out", str(out)], workdir)
    assert res.returncode == 0, res.stderr
    assert out.with_suffix(".png").exists()


def test_certify_hypothesis_failure_exits_2(workdir):
    res = run_cli(["certify", "--alpha", "0.9", "--window", "bspline:1",
                   "--xi-max", "50", "--out", str(workdir / "h.json"),
                   "--no-plot"], workdir)
    assert res.returncode == 2
    assert "hypothesis-failed" in res.stdout


def test_certify_short_scan_exits_3(workdir):
    res = run_cli(["certify", "--alpha", "0.5", "--window", "bspline:1",
                   "--xi-max", "3", "--out", str(workdir / "i.json"),
                   "--no-plot"], workdir)
    assert res.returncode == 3
    assert "inconclusive" in res.stdout


def test_usage_errors_exit_1(workdir):
    res = run_cli(["certify", "--alpha", "1.5", "--window", "bspline:1",
                   "--out", str(workdir / "x.json"), "--no-plot"], workdir)
    assert res.returncode == 1
    res = run_cli(["symbol", "--alpha", "0.5", "--window", "nosuchwindow",
                   "--xi", "0:1:0.5", "--out", str(workdir / "x.csv"),
                   "--no-plot"], workdir)
    assert res.returncode == 1
    res = run_cli(["symbol", "--alpha", "0.5", "--window", "bspline:1",
                   "--xi", "zebra", "--out", str(workdir / "x.csv"),
                   "--no-plot"], workdir)
    assert res.returncode == 1


def test_symbol_grid_forms_and_determinism(workdir):
    a = workdir / "s1.csv"
    b = workdir / "s2.csv"
    base = ["symbol", "--alpha", "0.5", "--window", "bspline:1",
            "--xi-log", "0.1:100:9", "--threads", "3", "--no-plot"]
    assert run_cli(base + ["--out", str(a)], workdir).returncode == 0
    assert run_cli(base + ["--out", str(b)], workdir).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "xi,m,err"
    assert len(lines) == 10

    res = run_cli(["symbol", "--alpha", "0.5", "--window", "bspline:1",
                   "--xi", "0:2:0.5", "--parts",
                   "--out", str(workdir / "s3.csv"), "--no-plot"], workdir)
    assert res.returncode == 0
    header = (workdir / "s3.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "xi,m,err,part1,part2,part3,part4"

    res = run_cli(["symbol", "--alpha", "0.5", "--window", "bspline:1",
                   "--xi-list", "0.5,1.5,2.5",
                   "--out", str(workdir / "s4.csv"), "--no-plot"], workdir)
    assert res.returncode == 0
    assert len((workdir / "s4.csv").read_text(encoding="utf-8").splitlines()) == 4


def test_decompose_then_reconstruct_roundtrip(workdir, certificate_path):
    coef = workdir / "coef.csv"
    res = run_cli(["decompose", "--alpha", "0.5", "--window", "bspline:1",
                   "--signal", "gaussian", "--n", "512", "--dt", "0.0625",
                   "--t0", "-16", "--omega-max", "6", "--omega-step", "0.25",
                   "--out", str(coef), "--no-plot"], workdir)
    assert res.returncode == 0, res.stderr
    assert coef.exists() and (workdir / "coef.csv.json").exists()

    rec = workdir / "rec.csv"
    res = run_cli(["reconstruct", "--alpha", "0.5", "--window", "bspline:1",
                   "--coefficients", str(coef),
                   "--certificate", str(certificate_path),
                   "--out", str(rec), "--no-plot"], workdir)
    assert res.returncode == 0, res.stderr
    assert rec.exists()


def test_transform_roundtrip_reports_machine_precision(workdir, certificate_path):
    res = run_cli(["transform", "--alpha", "0.5", "--window", "bspline:1",
                   "--signal", "chirp:rate=0.5", "--n", "512", "--roundtrip",
                   "--certificate", str(certificate_path),
                   "--out", str(workdir / "rt.csv"), "--no-plot"], workdir)
    assert res.returncode == 0, res.stderr
    match = re.search(r"roundtrip relative error: ([0-9.e+-]+)", res.stdout)
    assert match is not None, res.stdout
    assert float(match.group(1)) < 1e-9


def test_transform_refuses_inversion_without_certificate(workdir):
    res = run_cli(["transform", "--alpha", "0.5", "--window", "bspline:1",
                   "--signal", "gaussian", "--invert",
                   "--out", str(workdir / "nope.csv"), "--no-plot"], workdir)
    assert res.returncode == 1


def test_lemma_check_list_and_single(workdir):
    res = run_cli(["lemma-check", "--list"], workdir)
    assert res.returncode == 0
    for tag in ("2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8"):
        assert tag in res.stdout
    res = run_cli(["lemma-check", "--which", "2.7", "--alpha", "0.5",
                   "--xi", "100", "--window", "gaussian"], workdir)
    assert res.returncode == 0
    assert "[PASS] 2.7" in res.stdout
    res = run_cli(["lemma-check", "--which", "substitution", "--alpha", "0.5",
                   "--xi", "100", "--window", "gaussian"], workdir)
    assert res.returncode == 0
    res = run_cli(["lemma-check", "--which", "no-such-check"], workdir)
    assert res.returncode == 1


def test_report_bundle(workdir):
    outdir = workdir / "rep"
    res = run_cli(["report", "--alpha", "0.5", "--window", "bspline:1",
                   "--xi-max", "300", "--tol", "1e-2",
                   "--outdir", str(outdir)], workdir)
    assert res.returncode == 0, res.stderr
    for name in ("certificate.json", "certificate.png", "summary.txt",
                 "symbol.csv", "symbol.png"):
        assert (outdir / name).exists(), name
