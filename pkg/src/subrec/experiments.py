"""Drivers behind the experiment subcommands.

Each driver generates seeded synthetic data, runs the estimator, and
returns plain rows ready for CSV output.  Trials are independent, use
``seed + trial_index``, and may run in parallel; results are merged by
trial index, so thread count never changes the numbers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .estimator import DEFAULT_MAX_ITER, DEFAULT_TOL, EstimatorConfig, estimate
from .subspace import recovery_error, top_d_subspace
from .synthetic import SyntheticModel, generate

__all__ = [
    "resolve_threads",
    "recovery_trial",
    "exact_recovery_sweep",
    "convergence_run",
    "noise_sweep",
]


def resolve_threads(threads=None):
    """Thread cap for trial loops: argument, then SUBREC_THREADS, then CPU count."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("SUBREC_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"SUBREC_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def recovery_trial(
    ambient_dim,
    subspace_dim,
    n_inliers,
    n_outliers,
    noise,
    seed,
    tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
):
    """Generate one data set, estimate, and return the recovery error.

    On breakdown the estimator hands back its last usable iterate, so
    the error is still well defined (and in the recovery regime it is
    exactly the interesting number).
    """
    model = SyntheticModel(
        ambient_dim=ambient_dim,
        subspace_dim=subspace_dim,
        n_inliers=n_inliers,
        n_outliers=n_outliers,
        noise=noise,
        seed=seed,
    )
    points, truth = generate(model)
    result = estimate(points, EstimatorConfig(tol=tol, max_iter=max_iter))
    found = top_d_subspace(result.sigma, subspace_dim)
    return recovery_error(found, truth)


def _trial_errors(trial, trials, seed, threads):
    workers = resolve_threads(threads)
    indexes = range(trials)
    if workers == 1:
        return [trial(seed + i) for i in indexes]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: trial(seed + i), indexes))


def exact_recovery_sweep(
    ambient_dim,
    subspace_dim,
    n_outliers,
    inlier_counts,
    trials,
    seed,
    noise=0.0,
    tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
    threads=None,
):
    """Mean recovery error as the inlier count sweeps across the transition.

    Returns one ``(n_inliers, mean, std, trials)`` row per count.
    """
    rows = []
    for n_inliers in inlier_counts:
        def trial(trial_seed, n=int(n_inliers)):
            return recovery_trial(
                ambient_dim, subspace_dim, n, n_outliers, noise, trial_seed,
                tol=tol, max_iter=max_iter,
            )
        errors = _trial_errors(trial, trials, seed, threads)
        rows.append(
            (int(n_inliers), float(np.mean(errors)), float(np.std(errors)), trials)
        )
    return rows


def convergence_run(
    ambient_dim,
    subspace_dim,
    n_inliers,
    n_outliers,
    noise,
    seed,
    tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
):
    """One estimate with the full iterate history.

    Returns ``(result, truth, rows)`` where each row is
    ``(k, distance_to_final, recovery_error_at_k)`` for k = 1 .. K; the
    last row's distance is zero by construction.
    """
    model = SyntheticModel(
        ambient_dim=ambient_dim,
        subspace_dim=subspace_dim,
        n_inliers=n_inliers,
        n_outliers=n_outliers,
        noise=noise,
        seed=seed,
    )
    points, truth = generate(model)
    result = estimate(
        points, EstimatorConfig(tol=tol, max_iter=max_iter), keep_iterates=True
    )
    final = result.iterates[-1]
    rows = []
    for k in range(1, result.iterations + 1):
        iterate = result.iterates[k]
        found = top_d_subspace(iterate, subspace_dim)
        rows.append(
            (
                k,
                float(np.linalg.norm(iterate - final)),
                recovery_error(found, truth),
            )
        )
    return result, truth, rows


def noise_sweep(
    ambient_dim,
    subspace_dim,
    n_inliers,
    n_outliers,
    noise_levels,
    trials,
    seed,
    tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
    threads=None,
):
    """Mean recovery error per noise level; one ``(epsilon, mean, std)`` row each."""
    rows = []
    for eps in noise_levels:
        def trial(trial_seed, e=float(eps)):
            return recovery_trial(
                ambient_dim, subspace_dim, n_inliers, n_outliers, e, trial_seed,
                tol=tol, max_iter=max_iter,
            )
        errors = _trial_errors(trial, trials, seed, threads)
        rows.append((float(eps), float(np.mean(errors)), float(np.std(errors))))
    return rows
