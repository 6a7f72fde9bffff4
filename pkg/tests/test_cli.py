import os
import subprocess
import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "superdouble", *map(str, args)],
                          capture_output=True, text=True, env=full_env)


@pytest.mark.parametrize("args, out", [
    (("bracket", "p1", "x1", "--doubled", "--dim", "1"), "1"),
    (("bracket", "x1", "x1"), "0"),
    (("bracket", "xi1", "xis_1"), "1"),
    (("bracket", "xs_1*xi1", "x1"), "xi1"),
    (("bracket", "pt_2", "xt_2^2"), "2*xt_2"),
])
def test_bracket(args, out):
    r = run(*args)
    assert r.returncode == 0, r.stderr
    assert r.stdout.strip() == out


def test_bracket_reads_files(tmp_path):
    f = tmp_path / "a.expr"
    f.write_text("p1*xi1 + pt_1*xis_1\n")
    r = run("bracket", f, "x1*xt_1")
    assert r.stdout.strip() == "x1*xis_1 + xt_1*xi1"


@pytest.mark.parametrize("args", [
    ("bracket", "q1", "x1"),
    ("bracket", "xi1^2", "x1"),
    ("bracket", "x1 +", "x1"),
    ("bracket", "th1", "xi1"),
    ("bracket",),
    ("frobnicate",),
    ("check", "nonsense"),
    ("check", "strong", "--dim", "0"),
])
def test_usage_and_parse_errors_exit_2(args):
    r = run(*args)
    assert r.returncode == 2
    assert r.stdout == ""


def test_cbracket_hand_example():
    r = run("cbracket", DATA / "vector_x1.sec", DATA / "form_xt1.sec")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert "vector[1] = -1/2*x1" in lines
    assert "form[1] = 1/2*xt_1" in lines
    assert lines[-1] == "difference = 0"


@pytest.mark.parametrize("a, b", [("vector_x1.sec", "vector_x1.sec"), ("constant.sec", "constant.sec")])
def test_cbracket_trivial_cases_all_zero(a, b):
    r = run("cbracket", DATA / a, DATA / b)
    assert r.returncode == 0
    assert all(line.endswith("= 0") for line in r.stdout.splitlines())


def test_cbracket_dimension_mismatch(tmp_path):
    f = tmp_path / "d2.sec"
    f.write_text("dim = 2\nX[2] = x1\n")
    r = run("cbracket", DATA / "vector_x1.sec", f)
    assert r.returncode == 2
    assert "dim" in r.stderr


def test_check_bialgebroid_files():
    ok = run("check", "bialgebroid", DATA / "so3.alg")
    assert ok.returncode == 0
    assert ok.stdout.strip() == "CHECK bialgebroid so3.alg: PASS"
    bad = run("check", "bialgebroid", DATA / "nonjacobi.alg")
    assert bad.returncode == 1
    assert "FAIL residual=" in bad.stdout and "residual=0" not in bad.stdout


def test_check_strong_is_deterministic():
    args = ("check", "strong", "--dim", "2", "--degree", "2", "--samples", "20", "--seed", "7")
    a, b = run(*args), run(*args)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert "CHECK strong.d_squared_bracket: PASS (20 samples)" in a.stdout


@pytest.mark.parametrize("kind", ["project", "genlie", "metric", "proto", "cbracket"])
def test_check_kinds_pass(kind):
    r = run("check", kind, "--samples", "3")
    assert r.returncode == 0, r.stdout + r.stderr
    assert r.stdout.count("PASS") == len(r.stdout.splitlines())


def test_check_courant_with_file():
    r = run("check", "courant", DATA / "so3.alg", "--samples", "2", "--seed", "3")
    assert r.returncode == 0
    assert len(r.stdout.splitlines()) == 6


def test_check_proto_file():
    r = run("check", "proto", DATA / "flat_constant_H.proto")
    assert r.returncode == 0
    assert r.stdout.strip() == "CHECK proto: PASS"


def test_timing_only_on_request():
    plain = run("check", "metric", "--samples", "2")
    timed = run("check", "metric", "--samples", "2", "--timing")
    assert "s]" not in plain.stdout
    assert all(line.endswith("s]") for line in timed.stdout.splitlines())


def test_selftest_quick_passes_and_is_deterministic():
    a = run("selftest", "--quick")
    assert a.returncode == 0, a.stdout
    assert "FAIL" not in a.stdout
    assert a.stdout == run("selftest", "--quick").stdout


def test_selftest_detects_injected_sign_fault():
    r = run("selftest", "--quick", env={"SUPERDOUBLE_INJECT_FAULT": "odd-sign"})
    assert r.returncode == 1
    last = r.stdout.splitlines()[-1]
    assert "FAIL residual=" in last
