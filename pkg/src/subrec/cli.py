"""The ``subrec`` command line: data synthesis, estimation, experiments.

Every command writes its primary output plus a ``<out>.manifest.json``
recording the command line, the parsed configuration, seeds, input and
output paths, duration, and the library version.  Rerunning a command
with the same arguments reproduces the data files byte for byte.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .estimator import DEFAULT_MAX_ITER, DEFAULT_TOL, EstimatorConfig, estimate, objective
from .experiments import convergence_run, exact_recovery_sweep, noise_sweep
from .fileio import (
    read_points_csv,
    read_truth_json,
    write_json,
    write_points_csv,
    write_rows_csv,
    write_truth_json,
)
from .subspace import recovery_error, top_d_subspace
from .synthetic import SyntheticModel, generate

__all__ = ["main"]


class CLIError(Exception):
    """A command failed in a way the user has to fix."""


def _parse_int_range(text):
    """Parse ``lo:hi:step`` into an inclusive list of ints."""
    parts = text.split(":")
    if len(parts) != 3:
        raise CLIError(f"expected lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (int(p) for p in parts)
    except ValueError:
        raise CLIError(f"range bounds must be integers, got {text!r}") from None
    if step < 1:
        raise CLIError(f"range step must be positive, got {step}")
    if hi < lo:
        raise CLIError(f"range is empty: {text!r}")
    return list(range(lo, hi + 1, step))


def _parse_log_range(text):
    """Parse ``lo:hi:steps`` into a log-spaced list of floats."""
    parts = text.split(":")
    if len(parts) != 3:
        raise CLIError(f"expected lo:hi:steps, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError:
        raise CLIError(f"bad log range {text!r}") from None
    if not 0.0 < lo <= hi:
        raise CLIError(f"need 0 < lo <= hi, got {text!r}")
    if steps < 1:
        raise CLIError(f"need at least one step, got {steps}")
    if steps == 1:
        return [lo]
    return [float(v) for v in np.geomspace(lo, hi, steps)]


def _claim_outputs(args, *paths):
    """Refuse to overwrite any existing output unless --force was given."""
    paths = [p for p in paths if p is not None]
    if not args.force:
        for p in paths:
            if Path(p).exists():
                raise CLIError(f"{p} exists, pass --force to overwrite")
    return paths


def _write_manifest(args, seeds, inputs, outputs, started):
    config = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "argv") and not k.startswith("_")
    }
    manifest = {
        "command_line": ["subrec", *args.argv],
        "config": config,
        "seeds": seeds,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "duration_seconds": time.perf_counter() - started,
        "version": __version__,
    }
    write_json(f"{outputs[0]}.manifest.json", manifest)


def cmd_synth(args):
    started = time.perf_counter()
    outputs = _claim_outputs(args, args.out, args.truth_out)
    model = SyntheticModel(
        ambient_dim=args.D,
        subspace_dim=args.d,
        n_inliers=args.n_inliers,
        n_outliers=args.n_outliers,
        noise=args.noise,
        seed=args.seed,
    )
    points, truth = generate(model)
    write_points_csv(args.out, points)
    write_truth_json(args.truth_out, truth)
    _write_manifest(args, [args.seed], [], outputs, started)
    return 0


def cmd_estimate(args):
    started = time.perf_counter()
    outputs = _claim_outputs(args, args.out, args.trace)
    points = read_points_csv(args.infile)
    truth = read_truth_json(args.truth) if args.truth else None
    config = EstimatorConfig(tol=args.tol, max_iter=args.max_iter)
    want_iterates = args.trace is not None and truth is not None
    result = estimate(points, config, keep_iterates=want_iterates)

    found = top_d_subspace(result.sigma, args.d)
    final_objective = (
        result.trace[-1].objective if result.trace else objective(result.sigma, points)
    )
    payload = {
        "D": int(points.shape[1]),
        "d": int(args.d),
        "sigma": [float(v) for v in result.sigma.ravel(order="C")],
        "basis": [float(v) for v in found.basis.ravel(order="C")],
        "termination": result.termination.value,
        "iterations": result.iterations,
        "objective": final_objective,
    }
    if truth is not None:
        payload["recovery_error"] = recovery_error(found, truth)
    write_json(args.out, payload)

    if args.trace is not None:
        rows = []
        for rec in result.trace:
            err = None
            if want_iterates:
                at_k = top_d_subspace(result.iterates[rec.k], args.d)
                err = recovery_error(at_k, truth)
            rows.append((rec.k, rec.objective, rec.rel_step, rec.eig_min, err))
        write_rows_csv(
            args.trace,
            ["k", "objective", "rel_step", "lambda_min", "recovery_error"],
            rows,
        )
    inputs = [args.infile] + ([args.truth] if args.truth else [])
    _write_manifest(args, [], inputs, outputs, started)
    return 0


def cmd_experiment_exact_recovery(args):
    started = time.perf_counter()
    outputs = _claim_outputs(args, args.out)
    counts = _parse_int_range(args.n_inliers_range)
    rows = exact_recovery_sweep(
        ambient_dim=args.D,
        subspace_dim=args.d,
        n_outliers=args.n_outliers,
        inlier_counts=counts,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    write_rows_csv(args.out, ["n_inliers", "mean_recovery_error", "std", "trials"], rows)
    _write_manifest(args, [args.seed], [], outputs, started)
    return 0


def cmd_experiment_convergence(args):
    started = time.perf_counter()
    outputs = _claim_outputs(args, args.out)
    _, _, rows = convergence_run(
        ambient_dim=args.D,
        subspace_dim=args.d,
        n_inliers=args.n_inliers,
        n_outliers=args.n_outliers,
        noise=args.noise,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    write_rows_csv(args.out, ["k", "sigma_diff_to_final", "recovery_error_k"], rows)
    _write_manifest(args, [args.seed], [], outputs, started)
    return 0


def cmd_experiment_noise(args):
    started = time.perf_counter()
    outputs = _claim_outputs(args, args.out)
    levels = _parse_log_range(args.noise_range)
    rows = noise_sweep(
        ambient_dim=args.D,
        subspace_dim=args.d,
        n_inliers=args.n_inliers,
        n_outliers=args.n_outliers,
        noise_levels=levels,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    write_rows_csv(args.out, ["epsilon", "mean_recovery_error", "std"], rows)
    _write_manifest(args, [args.seed], [], outputs, started)
    return 0


def _add_model_flags(parser, with_inliers=True):
    parser.add_argument("--D", type=int, required=True, help="ambient dimension")
    parser.add_argument("--d", type=int, required=True, help="inlier subspace dimension")
    if with_inliers:
        parser.add_argument("--n-inliers", type=int, required=True, help="inlier count")
    parser.add_argument("--n-outliers", type=int, required=True, help="outlier count")


def _add_solver_flags(parser):
    parser.add_argument(
        "--tol", type=float, default=DEFAULT_TOL,
        help="relative-step stopping tolerance (default %(default)g)",
    )
    parser.add_argument(
        "--max-iter", type=int, default=DEFAULT_MAX_ITER,
        help="iteration cap (default %(default)s)",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="subrec",
        description="Robust shape estimation and subspace recovery experiments.",
    )
    parser.add_argument("--version", action="version", version=f"subrec {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="generate a synthetic data set")
    _add_model_flags(synth)
    synth.add_argument("--noise", type=float, default=0.0, help="noise level (default 0)")
    synth.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    synth.add_argument("--out", required=True, help="points CSV to write")
    synth.add_argument("--truth-out", required=True, help="truth JSON to write")
    synth.add_argument("--force", action="store_true", help="overwrite existing files")
    synth.set_defaults(func=cmd_synth)

    est = commands.add_parser("estimate", help="run the estimator on a points CSV")
    est.add_argument("--in", dest="infile", required=True, help="points CSV to read")
    est.add_argument("--d", type=int, required=True, help="recovered subspace dimension")
    _add_solver_flags(est)
    est.add_argument("--out", required=True, help="result JSON to write")
    est.add_argument("--trace", help="also write a per-iteration trace CSV here")
    est.add_argument("--truth", help="truth JSON; adds recovery error to the outputs")
    est.add_argument("--force", action="store_true", help="overwrite existing files")
    est.set_defaults(func=cmd_estimate)

    experiment = commands.add_parser("experiment", help="run a sweep experiment")
    kinds = experiment.add_subparsers(dest="experiment_command", required=True)

    sweep = kinds.add_parser(
        "exact-recovery", help="recovery error across inlier counts"
    )
    _add_model_flags(sweep, with_inliers=False)
    sweep.add_argument(
        "--n-inliers-range", required=True, metavar="LO:HI:STEP",
        help="inclusive inlier-count grid",
    )
    sweep.add_argument("--trials", type=int, default=20, help="trials per grid point")
    sweep.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    _add_solver_flags(sweep)
    sweep.add_argument("--out", required=True, help="summary CSV to write")
    sweep.add_argument("--force", action="store_true", help="overwrite existing files")
    sweep.set_defaults(func=cmd_experiment_exact_recovery)

    conv = kinds.add_parser("convergence", help="per-iteration distances for one run")
    _add_model_flags(conv)
    conv.add_argument("--noise", type=float, default=0.0, help="noise level (default 0)")
    conv.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    _add_solver_flags(conv)
    conv.add_argument("--out", required=True, help="per-iteration CSV to write")
    conv.add_argument("--force", action="store_true", help="overwrite existing files")
    conv.set_defaults(func=cmd_experiment_convergence)

    noise = kinds.add_parser("noise", help="recovery error across noise levels")
    _add_model_flags(noise)
    noise.add_argument(
        "--noise-range", required=True, metavar="LO:HI:STEPS",
        help="log-spaced noise grid",
    )
    noise.add_argument("--trials", type=int, default=20, help="trials per level")
    noise.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    _add_solver_flags(noise)
    noise.add_argument("--out", required=True, help="summary CSV to write")
    noise.add_argument("--force", action="store_true", help="overwrite existing files")
    noise.set_defaults(func=cmd_experiment_noise)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except CLIError as err:
        print(f"subrec: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"subrec: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
