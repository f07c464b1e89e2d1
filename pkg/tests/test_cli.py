from __future__ import annotations

import json
import math

import numpy as np
import pytest

from ramsey_lgi.cli import build_parser, config_from_args, main, run
from ramsey_lgi.config import Engine, create_run_config
from ramsey_lgi.output import GridSpec, read_csv
from ramsey_lgi.phase_space import Thermal
from ramsey_lgi.pulses import PulseSchedule, Segment, SystemParams
from ramsey_lgi.ramsey import CorrelationRequest, MeasurementSpec, correlation


def _sidecar(path):
    return json.loads(path.with_suffix(".json").read_text(encoding="utf-8"))


def test_zero_kick_correlator_is_a_product_of_cosines(run_cli, tmp_path):
    code = run_cli("correlate", "--alpha", "0", "--phases", "0.3", "0.5", "0", "--theta-grid", "0:3:4")
    assert code == 0
    rows = read_csv(tmp_path / "correlate.csv")
    assert len(rows) == 4
    for row in rows:
        assert float(row["analytic"]) == pytest.approx(math.cos(0.3) * math.cos(0.5))
    meta = _sidecar(tmp_path / "correlate.csv")
    assert meta["command"] == "correlate"
    assert meta["columns"][-1] == "analytic"
    assert meta["config"]["phases"] == [0.3, 0.5, 0.0]


def test_correlate_with_both_engines(run_cli, tmp_path):
    code = run_cli("correlate", "--engine", "both", "--alpha", "1", "--nbar", "0.5",
                   "--theta-grid", "0:6:5", "--dim", "40")
    assert code == 0
    rows = read_csv(tmp_path / "correlate.csv")
    assert max(float(r["abs_diff"]) for r in rows) < 1e-6


def test_zero_tolerance_reports_disagreement(run_cli):
    code = run_cli("correlate", "--engine", "both", "--alpha", "1", "--theta-grid", "0:6:5",
                   "--dim", "40", "--tol", "0")
    assert code == 2


def test_small_fock_space_is_a_truncation_error(run_cli):
    assert run_cli("correlate", "--engine", "both", "--alpha", "2", "--dim", "25") == 3


def test_correlate_over_the_alpha2_plane(run_cli, tmp_path):
    code = run_cli("correlate", "--alpha1", "1+1i", "--alpha2-re-grid=-1:1:3",
                   "--alpha2-im-grid=-1:1:3")
    assert code == 0
    rows = read_csv(tmp_path / "correlate.csv")
    assert [(float(r["alpha2_re"]), float(r["alpha2_im"])) for r in rows[:3]] == [
        (-1.0, -1.0), (0.0, -1.0), (1.0, -1.0)
    ]
    assert _sidecar(tmp_path / "correlate.csv")["alpha1"] == [1.0, 1.0]


def test_damped_correlator_uses_the_waiting_time(run_cli, tmp_path):
    code = run_cli("correlate", "--alpha", "1", "--theta-grid", "0:0:1", "--gamma", "0.1",
                   "--n-eq", "1", "--dt", "3")
    assert code == 0
    damped = float(read_csv(tmp_path / "correlate.csv")[0]["analytic"])
    assert run_cli("correlate", "--alpha", "1", "--theta-grid", "0:0:1") == 0
    undamped = float(read_csv(tmp_path / "correlate.csv")[0]["analytic"])
    assert damped != pytest.approx(undamped)


def test_png_output_and_report(run_cli, tmp_path):
    code = run_cli("correlate", "--alpha", "1", "--theta-grid", "0:6:7", "--png")
    assert code == 0
    assert (tmp_path / "correlate.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert (tmp_path / "report.pdf").read_bytes()[:4] == b"%PDF"


@pytest.mark.parametrize("argv", [
    ["correlate", "--bogus"],
    ["correlate", "--theta-grid", "0:1"],
    ["correlate", "--engine", "quantum"],
    ["teleport"],
    ["correlate", "--preset", "lgi_map", "--config", "run.json"],
    ["decoherence"],
])
def test_usage_errors_exit_with_one(run_cli, argv):
    assert run_cli(*argv) == 1


def test_hot_lgi_sweep_never_violates(run_cli, tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({
        "alpha_grid": "0:0.1:3",
        "theta_grid": "0:6.283185307179586:4",
        "optimizer": {"grid_resolution": 10, "n_starts": 2},
    }), encoding="utf-8")
    code = run_cli("lgi-sweep", "--config", str(config), "--nbar", "0.5", "--alpha-max", "0.1")
    assert code == 0
    rows = read_csv(tmp_path / "lgi_sweep.csv")
    assert len(rows) == 12
    assert all(float(r["w_max"]) <= 1.0 + 1e-9 for r in rows)


def test_small_alpha_preset_checks_the_asymptote(run_cli, tmp_path):
    assert run_cli("lgi-sweep", "--preset", "small_alpha") == 0
    checks = read_csv(tmp_path / "lgi_asymptote.csv")
    assert len(checks) == 10
    assert all(r["passed"] == "true" for r in checks)


def test_lgi_sweep_with_oracle_witness(run_cli, tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({"optimizer": {"grid_resolution": 10, "n_starts": 2}}),
                      encoding="utf-8")
    code = run_cli("lgi-sweep", "--config", str(config), "--engine", "both", "--alpha", "0.5",
                   "--theta", "2.2", "--dim", "40")
    assert code == 0
    row = read_csv(tmp_path / "lgi_sweep.csv")[0]
    assert float(row["abs_diff"]) < 1e-6
    assert float(row["alpha"]) == 0.5


def test_wigner_files(run_cli, tmp_path):
    code = run_cli("wigner", "--alpha1", "1+1i", "--resolution", "41", "--dt", "0", "1",
                   "--gamma", "0.01", "--n-eq", "1")
    assert code == 0
    for name in ("wigner_dt0", "wigner_dt1"):
        matrix = np.loadtxt(tmp_path / f"{name}.csv", delimiter=",")
        assert matrix.shape == (41, 41)
        header = _sidecar(tmp_path / f"{name}.csv")["header"]
        assert header["integral"] == pytest.approx(1.0, abs=1e-3)
    assert _sidecar(tmp_path / "wigner_dt1.csv")["header"]["fringe_contrast"] < 1.0


def test_classical_command(run_cli, tmp_path):
    code = run_cli("classical", "--alpha", "1", "--theta-grid", "0:3.14:3", "--samples", "20000",
                   "--n-seeds", "2", "--seed", "7")
    assert code == 0
    rows = read_csv(tmp_path / "classical.csv")
    assert len(rows) == 6
    assert [int(r["seed"]) for r in rows[:2]] == [7, 8]
    assert all(abs(float(r["z"])) < 4.0 for r in rows)
    assert all(float(r["classical_w"]) <= 1.0 + 1e-9 for r in rows)


def test_decoherence_command(run_cli, tmp_path):
    code = run_cli("decoherence", "--preset", "window_decoherence", "--t-grid", "0:12.566370614359172:5")
    assert code == 0
    rows = read_csv(tmp_path / "decoherence.csv")
    assert float(rows[0]["expectation"]) == pytest.approx(1.0)
    assert all(float(r["zeta"]) >= 0.0 for r in rows)
    rates = _sidecar(tmp_path / "decoherence.csv")["rates"]
    assert rates["quoted"] == pytest.approx(0.03)
    assert rates["fitted"] == pytest.approx(0.015, rel=0.1)


@pytest.mark.slow
def test_decoherence_against_master_equation(run_cli, tmp_path):
    code = run_cli("decoherence", "--preset", "window_decoherence", "--t-grid", "0:3.141592653589793:3",
                   "--engine", "both", "--dim", "50")
    assert code == 0
    assert max(float(r["abs_diff"]) for r in read_csv(tmp_path / "decoherence.csv")) < 1e-6


@pytest.mark.slow
def test_verify_suite(run_cli, tmp_path):
    config = tmp_path / "verify.json"
    config.write_text(json.dumps({
        "preset": "verify",
        "alpha_grid": "0.5:1:2",
        "theta_grid": "0.7853981633974483:3.141592653589793:2",
        "samples": 20000,
        "dim": 60,
    }), encoding="utf-8")
    assert run_cli("verify", "--config", str(config)) == 0
    rows = read_csv(tmp_path / "verify.csv")
    assert {r["check"] for r in rows} >= {"kraus_completeness", "analytic_vs_oracle",
                                          "two_level_sum_rule", "classical_bound"}
    assert all(r["passed"] == "true" for r in rows)


def test_flags_override_the_preset():
    args = build_parser().parse_args(["lgi-sweep", "--preset", "lgi_map", "--alpha", "0.7",
                                      "--lambda", "0.2", "--engine", "oracle"])
    config = config_from_args(args)
    assert config.alpha_grid == GridSpec.point(0.7)
    assert config.params.lam == 0.2
    assert config.engine is Engine.ORACLE
    assert config.theta_grid.count == 60


def test_alpha_max_keeps_the_grid_count():
    args = build_parser().parse_args(["lgi-sweep", "--alpha-max", "2", "--alpha1", "5+5i"])
    config = config_from_args(args)
    assert config.alpha_grid == GridSpec(0.0, 2.0, 60)
    assert config.alpha1 == 5 + 5j


def test_main_returns_zero_on_success(tmp_path):
    assert main(["correlate", "--alpha", "0.5", "--theta", "1.0", "--output-dir", str(tmp_path), "-q"]) == 0


def test_classical_output_does_not_depend_on_threads(tmp_path):
    argv = ["classical", "--alpha", "1", "--theta-grid", "0:3.14:3", "--samples", "20000",
            "--n-seeds", "2", "--seed", "11", "--quiet"]
    for threads in ("1", "2"):
        assert main([*argv, "--threads", threads, "--output-dir", str(tmp_path / threads)]) == 0
    single = (tmp_path / "1" / "classical.csv").read_bytes()
    assert single == (tmp_path / "2" / "classical.csv").read_bytes()
    assert _sidecar(tmp_path / "2" / "classical.csv")["model"] == "classical"


def _write_request(tmp_path):
    schedule = PulseSchedule((Segment(0.8, 1, 0), Segment(1.4, 0, 1)))
    first = MeasurementSpec.from_schedule(0.2, schedule.duration, schedule)
    second = MeasurementSpec.from_schedule(-0.5, 2 * schedule.duration + 0.3, schedule)
    request = CorrelationRequest((first, second), Thermal(0.4))
    path = tmp_path.parent / f"{tmp_path.name}-request.json"
    path.write_text(json.dumps(request.to_dict()), encoding="utf-8")
    return path, request


def test_correlate_reads_a_request_file(run_cli, tmp_path):
    path, request = _write_request(tmp_path)
    assert run_cli("correlate", "--request", str(path), "--engine", "both") == 0
    (row,) = read_csv(tmp_path / "correlate.csv")
    expected = correlation(request, SystemParams(1.0, 0.5))
    assert float(row["analytic"]) == pytest.approx(expected, abs=1e-12)
    assert float(row["modulated"]) == pytest.approx(expected, abs=1e-9)
    assert float(row["abs_diff"]) < 1e-6
    meta = _sidecar(tmp_path / "correlate.csv")
    assert CorrelationRequest.from_dict(meta["request"]) == request
    assert meta["config"]["output_dir"] == str(tmp_path)


def test_unreadable_request_is_a_config_error(run_cli, tmp_path):
    path = tmp_path.parent / f"{tmp_path.name}-broken.json"
    path.write_text('{"specs": [{"phi": 0.1}]}', encoding="utf-8")
    assert run_cli("correlate", "--request", str(path)) == 1
    assert run_cli("correlate", "--request", str(tmp_path / "missing.json")) == 1


@pytest.mark.parametrize("argv", [
    ("correlate", "--engine", "both", "--alpha", "1", "--theta-grid", "0:6:5", "--dim", "40", "--tol", "0"),
    ("correlate", "--engine", "both", "--alpha", "2", "--dim", "25"),
    ("wigner", "--alpha1", "1+1i", "--resolution", "21", "--engine", "both", "--dim", "40", "--tol", "0"),
])
def test_failed_runs_leave_no_files(run_cli, tmp_path, argv):
    assert run_cli(*argv) != 0
    assert list(tmp_path.iterdir()) == []


def test_run_reports_the_published_files(tmp_path):
    out = run("correlate", create_run_config(theta_grid="0:1:2", output_dir=str(tmp_path / "out")))
    assert [p.name for p in out.files] == ["correlate.csv"]
    assert all(p.parent == tmp_path / "out" and p.exists() for p in out.files)
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["correlate.csv", "correlate.json"]
