"""Experiment drivers: seeding, row shapes, thread independence."""

import os

import numpy as np
import pytest

from subrec.experiments import (
    convergence_run,
    exact_recovery_sweep,
    noise_sweep,
    recovery_trial,
    resolve_threads,
)


def test_resolve_threads_argument_wins(monkeypatch):
    monkeypatch.setenv("SUBREC_THREADS", "7")
    assert resolve_threads(3) == 3
    assert resolve_threads(0) == 1


def test_resolve_threads_env(monkeypatch):
    monkeypatch.setenv("SUBREC_THREADS", "5")
    assert resolve_threads() == 5
    monkeypatch.setenv("SUBREC_THREADS", "0")
    assert resolve_threads() == 1


def test_resolve_threads_env_must_be_integer(monkeypatch):
    monkeypatch.setenv("SUBREC_THREADS", "many")
    with pytest.raises(ValueError, match="integer"):
        resolve_threads()


def test_resolve_threads_default(monkeypatch):
    monkeypatch.delenv("SUBREC_THREADS", raising=False)
    assert resolve_threads() == (os.cpu_count() or 1)


def test_recovery_trial_in_the_recovery_regime():
    assert recovery_trial(4, 2, 14, 6, 0.0, 1) < 1e-6


def test_recovery_trial_survives_collapse():
    # 4 of 5 points on a line in the plane drives the iterates onto it;
    # the trial still reports the (tiny) error of the collapsed axis
    err = recovery_trial(2, 1, 4, 1, 0.0, 3)
    assert err < 1e-6


def test_sweep_rows():
    rows = exact_recovery_sweep(4, 2, 6, [6, 14], trials=3, seed=2)
    assert len(rows) == 2
    for (n, mean, std, trials), expected_n in zip(rows, (6, 14)):
        assert n == expected_n
        assert trials == 3
        assert np.isfinite(mean) and mean >= 0.0
        assert np.isfinite(std) and std >= 0.0
    # below the transition the error is macroscopic, above it vanishes
    assert rows[0][1] > 1e-3
    assert rows[1][1] < 1e-6


def test_sweep_is_thread_count_independent():
    kwargs = dict(trials=4, seed=11)
    serial = exact_recovery_sweep(4, 2, 6, [8, 12], threads=1, **kwargs)
    threaded = exact_recovery_sweep(4, 2, 6, [8, 12], threads=4, **kwargs)
    assert serial == threaded


def test_sweep_matches_manual_trials():
    row = exact_recovery_sweep(4, 2, 6, [10], trials=2, seed=5)[0]
    manual = [
        recovery_trial(4, 2, 10, 6, 0.0, 5),
        recovery_trial(4, 2, 10, 6, 0.0, 6),
    ]
    assert row[1] == float(np.mean(manual))
    assert row[2] == float(np.std(manual))


def test_convergence_run_rows():
    result, truth, rows = convergence_run(4, 2, 12, 6, 0.0, 1)
    assert len(rows) == result.iterations
    ks = [row[0] for row in rows]
    assert ks == list(range(1, result.iterations + 1))
    distances = np.array([row[1] for row in rows])
    errors = np.array([row[2] for row in rows])
    assert np.all(distances >= 0.0) and np.all(np.isfinite(distances))
    assert np.all(errors >= 0.0) and np.all(np.isfinite(errors))
    # the distance column is measured against the final iterate
    assert rows[-1][1] == 0.0
    assert rows[-1][2] < 1e-6
    assert truth.dim == 2


def test_noise_sweep_rows():
    rows = noise_sweep(4, 2, 12, 6, [0.0, 1e-2], trials=2, seed=3)
    assert len(rows) == 2
    assert rows[0][0] == 0.0 and rows[1][0] == 1e-2
    # the clean endpoint recovers exactly, the noisy one does not
    assert rows[0][1] < 1e-8
    assert rows[1][1] > 1e-3
    for eps, mean, std in rows:
        assert np.isfinite(mean) and np.isfinite(std)
