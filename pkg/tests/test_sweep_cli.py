import json
import math
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from moduli_census.emit import fmt_float, frac_str, json_dumps, parse_frac
from moduli_census.cli import main
from moduli_census.sweep import SweepConfig, build_report, records_to_csv, run_sweep


# -- emit helpers --------------------------------------------------------------

def test_frac_str():
    assert frac_str(Fraction(189, 8)) == "189/8"
    assert frac_str(Fraction(40, 1)) == "40"
    assert frac_str(Fraction(-3, 4)) == "-3/4"


@given(st.fractions())
def test_frac_roundtrip(x):
    assert parse_frac(frac_str(x)) == x


def test_fmt_float_17_digits():
    assert fmt_float(0.1) == "0.10000000000000001"
    assert fmt_float(float("nan")) == "nan"
    assert float(fmt_float(math.pi)) == math.pi


def test_json_dumps_deterministic():
    payload = {"b": Fraction(1, 3), "a": [0.25, {"x": 1}]}
    assert json_dumps(payload) == json_dumps(payload)
    out = json.loads(json_dumps(payload))
    assert out["b"] == "1/3"
    assert out["a"][0] == 0.25


# -- sweeps ----------------------------------------------------------------------

def test_sweep_enumerate_counts_and_determinism():
    cfg1 = SweepConfig(q=3, gamma=5, workers=1)
    cfg2 = SweepConfig(q=3, gamma=5, workers=2)
    recs1 = run_sweep(cfg1)
    recs2 = run_sweep(cfg2)
    assert len(recs1) == 162
    assert records_to_csv(recs1, cfg1) == records_to_csv(recs2, cfg2)


def test_sweep_sample_mode_deterministic():
    cfg = SweepConfig(q=3, gamma=6, mode="sample", count=25, seed=42,
                      compute_moduli=False)
    a = records_to_csv(run_sweep(cfg), cfg)
    b = records_to_csv(run_sweep(cfg), cfg)
    assert a == b
    assert len(a.splitlines()) == 26


def test_sweep_report_contents():
    cfg = SweepConfig(q=3, gamma=5)
    recs = run_sweep(cfg)
    rep = build_report(recs, cfg)
    assert rep.count == 162
    # empirical first moment ties exactly to the records
    assert rep.moments[1][1] == math.fsum(r.R[1] for r in recs) / 162
    assert rep.covariance["1,1"] >= 0
    assert "1,2" in rep.theoretical_covariance
    assert rep.theoretical_moments["1"]["1"]["D"] == 10


def test_sweep_delta_is_r_sum():
    cfg = SweepConfig(q=3, gamma=6, mode="sample", count=10, seed=1,
                      compute_moduli=False)
    for rec in run_sweep(cfg):
        assert rec.delta_Z == pytest.approx(sum(rec.R[k] for k in (1, 2, 3)), abs=1e-15)


def test_sweep_budget_error():
    from moduli_census.errors import BudgetError
    with pytest.raises(BudgetError):
        run_sweep(SweepConfig(q=7, gamma=9))


def test_env_var_workers(monkeypatch):
    from moduli_census.sweep import resolve_workers
    monkeypatch.setenv("MODULI_CENSUS_WORKERS", "3")
    assert resolve_workers(1) == 3
    monkeypatch.delenv("MODULI_CENSUS_WORKERS")
    assert resolve_workers(2) == 2


# -- CLI --------------------------------------------------------------------------

def run_cli(*args):
    from io import StringIO
    import contextlib
    buf = StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(args))
    return code, buf.getvalue()


def test_cli_curve_info():
    code, out = run_cli("curve-info", "--q", "3", "--f", "0,1,0,0,0,1")
    assert code == 0
    data = json.loads(out)
    assert data["N"][:2] == [4, 14]
    assert data["L_poly"] == [1, 0, 2, 0, 9]
    assert data["jacobian_q"] == 12
    assert data["zeta"]["2"] == "187/108"


def test_cli_moduli_higgs():
    code, out = run_cli("moduli", "--q", "3", "--f", "0,1,0,0,0,1",
                        "--target", "higgs")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == "128304"
    assert data["is_integer"] is True


def test_cli_moduli_estimate():
    code, out = run_cli("moduli", "--q", "3", "--f", "0,1,0,0,0,1",
                        "--target", "estimate", "--rank", "2")
    assert code == 0
    data = json.loads(out)
    assert data["within_envelope"] is True


def test_cli_sweep_row_count(tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, out = run_cli("sweep", "--q", "3", "--gamma", "5",
                        "--out", str(out_csv))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert len(lines) == 163  # header + 162 rows
    report = json.loads(out)
    assert report["count"] == 162


def test_cli_sweep_worker_bytes(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run_cli("sweep", "--q", "3", "--gamma", "5", "--out", str(a),
            "--workers", "1")
    run_cli("sweep", "--q", "3", "--gamma", "5", "--out", str(b),
            "--workers", "2")
    assert a.read_bytes() == b.read_bytes()


def test_cli_parse_error_exit_code(capsys):
    code = main(["curve-info", "--q", "3", "--f", "0,zz,1"])
    assert code == 2


def test_cli_usage_error_exit_code():
    code = main(["moduli", "--q", "3"])
    assert code == 2


def test_cli_budget_error_exit_code(capsys):
    code = main(["sweep", "--q", "7", "--gamma", "9"])
    assert code == 3


def test_cli_validate_exit_zero():
    code, out = run_cli("validate", "--suite", "lambda", "--q", "3", "--gamma", "5")
    assert code == 0
    assert "PASS" in out


def test_cli_moments():
    code, out = run_cli("moments", "--q", "3", "--k-max", "2", "--n-max", "2",
                        "--D", "6", "--t", "0.5")
    assert code == 0
    data = json.loads(out)
    assert data["moments"]["1"]["1"]["value"] == pytest.approx(0.0141886, abs=1e-6)
    assert "1,2" in data["covariance"]


def test_console_entry_point():
    # installed script must work end to end in a fresh interpreter
    proc = subprocess.run(
        [sys.executable, "-m", "moduli_census.cli", "moduli", "--q", "3",
         "--f", "0,1,0,0,0,1", "--target", "ms20"],
        capture_output=True, text=True,
        cwd=os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["value"] == "15"
    assert data["cross_checks"]["component_assembly"]["residual"] == "4"
