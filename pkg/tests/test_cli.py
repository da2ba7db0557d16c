"""End-to-end command line checks plus the file round-trip contracts."""

import json
import shutil
import subprocess

import numpy as np
import pytest

import subrec
from subrec.cli import main
from subrec.estimator import estimate
from subrec.fileio import (
    format_float,
    read_points_csv,
    read_truth_json,
    write_points_csv,
    write_rows_csv,
    write_truth_json,
)
from subrec.subspace import Subspace
from subrec.synthetic import SyntheticModel, generate

COLLINEAR = np.array(
    [[1.0, 0.0], [2.0, 0.0], [-1.0, 0.0], [0.3, 1.0], [-0.2, 1.0]]
)


# ------------------------------------------------------------------- file IO


def test_format_float_round_trips():
    for value in (1 / 3, 0.1, -2.5e-17, 1e-300, 123456789.123456789):
        assert float(format_float(value)) == value
    assert format_float(0.0) == "0"


def test_points_csv_round_trip(tmp_path):
    rng = np.random.default_rng(80)
    points = rng.standard_normal((7, 3)) * np.exp(rng.uniform(-20, 20, (7, 3)))
    path = tmp_path / "pts.csv"
    write_points_csv(path, points)
    lines = path.read_text().splitlines()
    assert lines[0] == "x0,x1,x2"
    assert len(lines) == 8
    back = read_points_csv(path)
    assert np.array_equal(back, points)


def test_points_csv_rejects_ragged_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x0,x1\n1.0,2.0\n3.0\n")
    with pytest.raises(ValueError, match=r"bad.csv:3: expected 2 columns"):
        read_points_csv(path)


def test_points_csv_rejects_text_cell(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x0,x1\n1.0,oops\n")
    with pytest.raises(ValueError, match=r"bad.csv:2: non-numeric cell"):
        read_points_csv(path)


def test_points_csv_rejects_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(ValueError, match="empty file"):
        read_points_csv(path)
    path.write_text("x0,x1\n")
    with pytest.raises(ValueError, match="no data rows"):
        read_points_csv(path)


def test_truth_json_round_trip(tmp_path):
    truth = SyntheticModel(
        ambient_dim=5, subspace_dim=2, n_inliers=1, n_outliers=0, seed=1, rotate=True
    ).truth
    path = tmp_path / "truth.json"
    write_truth_json(path, truth)
    back = read_truth_json(path)
    assert np.array_equal(back.basis, truth.basis)


def test_truth_json_rejects_garbage(tmp_path):
    path = tmp_path / "t.json"
    path.write_text('{"D": 3}\n')
    with pytest.raises(ValueError, match="not a truth file"):
        read_truth_json(path)
    path.write_text('{"D": 3, "d": 2, "basis": [1.0, 0.0]}\n')
    with pytest.raises(ValueError, match="expected 6"):
        read_truth_json(path)


def test_rows_csv_blank_for_none(tmp_path):
    path = tmp_path / "rows.csv"
    write_rows_csv(path, ["a", "b", "c"], [(1, 0.5, None), (2, None, "x")])
    assert path.read_text() == "a,b,c\n1,0.5,\n2,,x\n"


# --------------------------------------------------------------------- synth


def synth_args(tmp_path, seed=3, force=False):
    args = [
        "synth", "--D", "4", "--d", "2", "--n-inliers", "8", "--n-outliers", "5",
        "--seed", str(seed),
        "--out", str(tmp_path / "points.csv"),
        "--truth-out", str(tmp_path / "truth.json"),
    ]
    if force:
        args.append("--force")
    return args


def test_synth_writes_model_files(tmp_path):
    assert main(synth_args(tmp_path)) == 0
    points = read_points_csv(tmp_path / "points.csv")
    truth = read_truth_json(tmp_path / "truth.json")
    assert points.shape == (13, 4)
    assert truth.ambient_dim == 4 and truth.dim == 2
    # the outlier block is the unit-cube rows
    assert np.all((points[8:] >= 0.0) & (points[8:] <= 1.0))
    # byte-for-byte what the library generates
    model = SyntheticModel(ambient_dim=4, subspace_dim=2, n_inliers=8, n_outliers=5, seed=3)
    expected, _ = generate(model)
    assert np.array_equal(points, expected)


def test_synth_refuses_overwrite(tmp_path, capsys):
    assert main(synth_args(tmp_path)) == 0
    assert main(synth_args(tmp_path)) == 1
    assert "pass --force to overwrite" in capsys.readouterr().err


def test_synth_force_rerun_is_byte_identical(tmp_path):
    assert main(synth_args(tmp_path)) == 0
    first = (tmp_path / "points.csv").read_bytes()
    first_truth = (tmp_path / "truth.json").read_bytes()
    assert main(synth_args(tmp_path, force=True)) == 0
    assert (tmp_path / "points.csv").read_bytes() == first
    assert (tmp_path / "truth.json").read_bytes() == first_truth


def test_synth_manifest(tmp_path):
    assert main(synth_args(tmp_path)) == 0
    manifest = json.loads((tmp_path / "points.csv.manifest.json").read_text())
    assert manifest["command_line"][:2] == ["subrec", "synth"]
    assert manifest["seeds"] == [3]
    assert manifest["config"]["D"] == 4 and manifest["config"]["d"] == 2
    assert manifest["inputs"] == []
    assert [p.endswith((".csv", ".json")) for p in manifest["outputs"]] == [True, True]
    assert manifest["duration_seconds"] >= 0.0
    assert manifest["version"] == subrec.__version__


# ------------------------------------------------------------------ estimate


def write_inputs(tmp_path, points, truth=None):
    write_points_csv(tmp_path / "in.csv", points)
    if truth is not None:
        write_truth_json(tmp_path / "truth.json", truth)


def test_estimate_result_payload(tmp_path):
    model = SyntheticModel(ambient_dim=4, subspace_dim=2, n_inliers=14, n_outliers=6, seed=1)
    points, truth = generate(model)
    write_inputs(tmp_path, points, truth)
    rc = main([
        "estimate", "--in", str(tmp_path / "in.csv"), "--d", "2",
        "--truth", str(tmp_path / "truth.json"),
        "--out", str(tmp_path / "result.json"),
    ])
    assert rc == 0
    payload = json.loads((tmp_path / "result.json").read_text())
    assert payload["D"] == 4 and payload["d"] == 2
    # 14 of 20 points on the plane puts this in the recovery regime, so
    # the run may end in a clean collapse rather than convergence
    assert payload["termination"] in ("converged", "breakdown")
    assert payload["iterations"] > 0
    assert payload["recovery_error"] < 1e-5
    sigma = np.array(payload["sigma"]).reshape(4, 4)
    assert np.array_equal(sigma, sigma.T)
    assert abs(np.trace(sigma) - 1.0) <= 1e-12
    basis = np.array(payload["basis"]).reshape(4, 2)
    np.testing.assert_allclose(basis.T @ basis, np.eye(2), atol=1e-10)
    # the CLI adds nothing: an in-process estimate on the same file matches
    library = estimate(read_points_csv(tmp_path / "in.csv"))
    assert payload["sigma"] == [float(v) for v in library.sigma.ravel()]
    assert payload["iterations"] == library.iterations
    assert payload["objective"] == library.trace[-1].objective


def test_estimate_one_step_on_standard_basis(tmp_path):
    write_inputs(tmp_path, np.eye(2))
    rc = main([
        "estimate", "--in", str(tmp_path / "in.csv"), "--d", "2",
        "--out", str(tmp_path / "result.json"),
    ])
    assert rc == 0
    payload = json.loads((tmp_path / "result.json").read_text())
    assert payload["termination"] == "converged"
    assert payload["iterations"] == 1
    assert payload["sigma"] == [0.5, 0.0, 0.0, 0.5]
    assert abs(payload["objective"]) < 1e-12
    assert "recovery_error" not in payload


def test_estimate_trace_with_truth(tmp_path):
    write_inputs(tmp_path, COLLINEAR, Subspace([[1.0], [0.0]]))
    rc = main([
        "estimate", "--in", str(tmp_path / "in.csv"), "--d", "1",
        "--truth", str(tmp_path / "truth.json"),
        "--out", str(tmp_path / "result.json"),
        "--trace", str(tmp_path / "trace.csv"),
    ])
    assert rc == 0
    payload = json.loads((tmp_path / "result.json").read_text())
    assert payload["recovery_error"] < 1e-6
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert lines[0] == "k,objective,rel_step,lambda_min,recovery_error"
    assert len(lines) == 1 + payload["iterations"]
    rows = [line.split(",") for line in lines[1:]]
    ks = [int(r[0]) for r in rows]
    assert ks == list(range(1, payload["iterations"] + 1))
    objectives = np.array([float(r[1]) for r in rows])
    assert np.all(np.diff(objectives) <= 1e-12)
    errors = [float(r[4]) for r in rows]
    assert errors[-1] < 1e-6


def test_estimate_trace_without_truth_leaves_error_blank(tmp_path):
    write_inputs(tmp_path, COLLINEAR)
    rc = main([
        "estimate", "--in", str(tmp_path / "in.csv"), "--d", "1",
        "--out", str(tmp_path / "result.json"),
        "--trace", str(tmp_path / "trace.csv"),
    ])
    assert rc == 0
    rows = [line.split(",") for line in (tmp_path / "trace.csv").read_text().splitlines()[1:]]
    assert all(r[4] == "" for r in rows)


@pytest.mark.parametrize(
    "breakage, message",
    [
        ("ragged", "columns"),
        ("missing", "No such file"),
        ("bad_d", "1 <= d"),
    ],
)
def test_estimate_failures_exit_nonzero(tmp_path, capsys, breakage, message):
    argv = ["estimate", "--in", str(tmp_path / "in.csv"), "--d", "2",
            "--out", str(tmp_path / "result.json")]
    if breakage == "ragged":
        (tmp_path / "in.csv").write_text("x0,x1\n1.0\n")
    elif breakage == "bad_d":
        write_inputs(tmp_path, np.eye(2))
        argv[4] = "5"
    assert main(argv) == 1
    err = capsys.readouterr().err
    assert err.startswith("subrec: ")
    assert message in err
    assert not (tmp_path / "result.json").exists()


# --------------------------------------------------------------- experiments


def test_experiment_exact_recovery(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main([
        "experiment", "exact-recovery", "--D", "4", "--d", "2", "--n-outliers", "6",
        "--n-inliers-range", "6:14:4", "--trials", "2", "--seed", "2",
        "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n_inliers,mean_recovery_error,std,trials"
    rows = [line.split(",") for line in lines[1:]]
    assert [int(r[0]) for r in rows] == [6, 10, 14]
    assert all(r[3] == "2" for r in rows)
    # macroscopic error at the balanced count, exact recovery past it
    assert float(rows[0][1]) > 1e-5
    assert float(rows[2][1]) < 1e-5


def test_experiment_single_cell_matches_trial(tmp_path):
    from subrec.experiments import recovery_trial

    out = tmp_path / "one.csv"
    rc = main([
        "experiment", "exact-recovery", "--D", "4", "--d", "2", "--n-outliers", "6",
        "--n-inliers-range", "12:12:1", "--trials", "1", "--seed", "9",
        "--out", str(out),
    ])
    assert rc == 0
    row = out.read_text().splitlines()[1].split(",")
    assert float(row[1]) == recovery_trial(4, 2, 12, 6, 0.0, 9)


def test_experiment_convergence(tmp_path):
    out = tmp_path / "conv.csv"
    rc = main([
        "experiment", "convergence", "--D", "4", "--d", "2",
        "--n-inliers", "12", "--n-outliers", "6", "--seed", "1",
        "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,sigma_diff_to_final,recovery_error_k"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) >= 5
    assert float(rows[-1][1]) == 0.0


def test_experiment_noise(tmp_path):
    out = tmp_path / "noise.csv"
    rc = main([
        "experiment", "noise", "--D", "4", "--d", "2",
        "--n-inliers", "12", "--n-outliers", "6",
        "--noise-range", "0.001:0.1:3", "--trials", "2", "--seed", "3",
        "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "epsilon,mean_recovery_error,std"
    eps = [float(line.split(",")[0]) for line in lines[1:]]
    np.testing.assert_allclose(eps, [1e-3, 1e-2, 1e-1], rtol=1e-12)


@pytest.mark.parametrize(
    "argv_tail, message",
    [
        (["exact-recovery", "--D", "4", "--d", "2", "--n-outliers", "6",
          "--n-inliers-range", "5", "--out", "x.csv"], "lo:hi:step"),
        (["noise", "--D", "4", "--d", "2", "--n-inliers", "12", "--n-outliers", "6",
          "--noise-range", "0:1:2", "--out", "x.csv"], "0 < lo"),
    ],
)
def test_experiment_rejects_bad_ranges(tmp_path, capsys, argv_tail, message):
    argv = ["experiment", *argv_tail]
    argv[argv.index("x.csv")] = str(tmp_path / "x.csv")
    assert main(argv) == 1
    assert message in capsys.readouterr().err


# --------------------------------------------------------------------- misc


def test_version_flag():
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0


def test_installed_entry_point():
    exe = shutil.which("subrec")
    assert exe is not None, "console script not installed"
    proc = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("subrec ")
