"""End-to-end tests of the command line interface."""

import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cmspaces.cli import EXIT_BAD_INPUT, EXIT_CHECK_FAILED, EXIT_NUMERICAL, EXIT_OK, main
from cmspaces.jsonio import decode, dumps, encode
from cmspaces.variety import AugmentedPair


def _run(capsys, monkeypatch, argv, stdin_text=None):
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse rejects flags by raising
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_is_byte_identical(capsys, monkeypatch):
    argv = ["gen", "--n", "3", "--k", "2", "--tau", "1,0", "--seed", "7"]
    code1, out1, _ = _run(capsys, monkeypatch, argv)
    code2, out2, _ = _run(capsys, monkeypatch, argv)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["kind"] == "representation"


def test_chart_invert_round_trip(capsys, monkeypatch):
    code, quad_json, _ = _run(capsys, monkeypatch, ["gen", "--n", "3", "--seed", "5"])
    assert code == EXIT_OK
    code, chart_json, _ = _run(capsys, monkeypatch, ["chart"], stdin_text=quad_json)
    assert code == EXIT_OK
    code, pair_json, _ = _run(
        capsys, monkeypatch, ["chart", "--invert"], stdin_text=chart_json
    )
    assert code == EXIT_OK
    code, chart2_json, _ = _run(capsys, monkeypatch, ["chart"], stdin_text=pair_json)
    assert code == EXIT_OK
    c1 = decode(json.loads(chart_json))
    c2 = decode(json.loads(chart2_json))
    dev = np.abs(c1.vector() - c2.vector()).max()
    assert dev < 1e-8 * max(1.0, np.abs(c1.vector()).max())


def test_normalize_reports_gauge_and_regularity(capsys, monkeypatch):
    code, quad_json, _ = _run(capsys, monkeypatch, ["gen", "--n", "2", "--seed", "3"])
    code, out, _ = _run(capsys, monkeypatch, ["normalize"], stdin_text=quad_json)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert sorted(payload.keys()) == ["gauge", "kind", "pair", "regularity"]
    assert payload["regularity"]["gauge_regular"] is True
    pair = decode(payload["pair"])
    assert isinstance(pair, AugmentedPair)


def test_flow_reports_small_level_deviation(capsys, monkeypatch):
    code, out, _ = _run(
        capsys,
        monkeypatch,
        ["flow", "--generator", "e", "--t", "0.3", "--n", "2", "--seed", "4"],
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["kind"] == "flow_result"
    assert payload["residuals"]["level_after"] < 1e-9


def test_verify_single_suite_passes(capsys, monkeypatch, tmp_path):
    report_path = tmp_path / "report.json"
    code, out, err = _run(
        capsys,
        monkeypatch,
        ["verify", "--suite", "linalg", "--seed", "2", "--out", str(report_path)],
    )
    assert code == EXIT_OK
    report = json.loads(report_path.read_text())
    assert report["schema"].startswith("cmspaces-report/")
    assert report["summary"]["failed"] == 0
    assert report["summary"]["errors"] == 0
    assert all(rec["name"].startswith("linalg.") for rec in report["records"])


def test_exit_codes_for_bad_input(capsys, monkeypatch):
    code, _, err = _run(capsys, monkeypatch, ["chart"], stdin_text='{"kind": "x"}')
    assert code == EXIT_BAD_INPUT
    code, _, _ = _run(capsys, monkeypatch, ["chart"], stdin_text="not json")
    assert code == EXIT_BAD_INPUT
    code, _, _ = _run(capsys, monkeypatch, ["gen", "--n", "0"])
    assert code == EXIT_BAD_INPUT
    code, _, _ = _run(capsys, monkeypatch, ["gen", "--k", "3"])
    assert code == EXIT_BAD_INPUT
    code, _, _ = _run(capsys, monkeypatch, ["verify", "--suite", "nonsense"])
    assert code == EXIT_BAD_INPUT


def test_invert_rejects_a_pair_payload(capsys, monkeypatch):
    code, quad_json, _ = _run(capsys, monkeypatch, ["gen", "--n", "2", "--seed", "6"])
    code, _, err = _run(capsys, monkeypatch, ["chart", "--invert"], stdin_text=quad_json)
    assert code == EXIT_BAD_INPUT


def test_degenerate_input_exits_numerical(capsys, monkeypatch):
    # a repeated block eigenvalue defeats normalization
    p = AugmentedPair(np.eye(3), np.eye(3), 1.0)
    code, _, err = _run(
        capsys, monkeypatch, ["normalize"], stdin_text=dumps(encode(p))
    )
    assert code == EXIT_NUMERICAL


def test_cm_tol_environment_variable(capsys, monkeypatch):
    monkeypatch.setenv("CM_TOL", "not-a-number")
    code, _, err = _run(capsys, monkeypatch, ["verify", "--suite", "linalg"])
    assert code == EXIT_BAD_INPUT
    assert "CM_TOL" in err
    monkeypatch.setenv("CM_TOL", "1e-8")
    code, _, _ = _run(capsys, monkeypatch, ["verify", "--suite", "linalg", "--seed", "2"])
    assert code == EXIT_OK


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "cmspaces", "gen", "--n", "2", "--seed", "1"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["kind"] == "representation"


def test_verify_maps_summaries_to_exit_codes(capsys, monkeypatch):
    def canned(failed, errors):
        return {
            "schema": "cmspaces-report/1",
            "config": {},
            "records": [],
            "summary": {"total": 1, "passed": 1 - failed - errors,
                        "failed": failed, "errors": errors},
        }

    monkeypatch.setattr("cmspaces.cli.run", lambda cfg: canned(1, 0))
    code, _, _ = _run(capsys, monkeypatch, ["verify", "--suite", "linalg"])
    assert code == EXIT_CHECK_FAILED
    monkeypatch.setattr("cmspaces.cli.run", lambda cfg: canned(0, 1))
    code, _, _ = _run(capsys, monkeypatch, ["verify", "--suite", "linalg"])
    assert code == EXIT_NUMERICAL


def test_verify_surfaces_internal_errors():
    # an absurdly tight tolerance breaks the solver contracts, which must
    # surface as an error exit, not a silent pass
    proc = subprocess.run(
        [
            sys.executable, "-m", "cmspaces", "verify",
            "--suite", "linalg", "--tol", "1e-30",
        ],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == EXIT_NUMERICAL
    assert "errors" in proc.stderr
