"""Tyler's M-estimator of scatter: objective, fixed-point update, full solver.

The estimator minimizes

    F(sigma) = mean_x log(x' inv(sigma) x) + log(det(sigma)) / D

over trace-one SPD matrices.  ``F`` is invariant to scaling of
``sigma`` and, up to an additive constant that does not depend on
``sigma``, to the magnitudes of the data points.  The minimizer is
found by the fixed-point iteration

    sigma_next = sum_x (x x' / (x' inv(sigma) x)),  renormalized to trace 1,

started from ``identity / D``.  On data sets dominated by a low-rank
inlier structure the iterates drift toward a singular matrix whose top
eigenspace is the inlier subspace; the solver reports that outcome
through its breakdown handling instead of failing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .geometry import SPD_RTOL, NotSPDError, ensure_symmetric

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
    "Termination",
    "BreakdownError",
    "EstimatorConfig",
    "IterationRecord",
    "EstimateResult",
    "check_points",
    "quadratic_forms",
    "objective",
    "fixed_point_step",
    "breakdown_detected",
    "estimate",
]

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 1000


class Termination(str, Enum):
    """How a solver run ended."""

    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    BREAKDOWN = "breakdown"


class BreakdownError(RuntimeError):
    """The iterate can no longer be used as an SPD matrix in floating point."""


@dataclass(frozen=True)
class EstimatorConfig:
    """Solver knobs.

    Attributes
    ----------
    tol : float
        Stop when the relative Frobenius step
        ``|sigma_k - sigma_{k-1}|_F / |sigma_k|_F`` falls below this.
    max_iter : int
        Iteration cap.
    breakdown_check : bool
        When true, additionally stop as soon as the fresh iterate fails
        the numerical SPD threshold (eig_min <= 1e-14 * eig_max).
        Forced breakdown (failed factorization, nonpositive or
        non-finite quadratic forms) always stops the solver regardless.
    """

    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    breakdown_check: bool = True

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")


@dataclass(frozen=True)
class IterationRecord:
    """Diagnostics for one produced iterate."""

    k: int
    objective: float
    rel_step: float
    eig_min: float


@dataclass
class EstimateResult:
    """Outcome of a solver run.

    ``sigma`` is the last finite usable iterate (trace one, symmetric).
    ``trace`` holds one :class:`IterationRecord` per produced iterate,
    so ``len(trace) == iterations``.  ``iterates`` is populated only
    when the solver was asked to keep them; entry ``i`` is the iterate
    after ``i`` updates, starting with the initializer at index 0.
    """

    sigma: np.ndarray
    termination: Termination
    iterations: int
    trace: list[IterationRecord]
    iterates: list[np.ndarray] | None = None


def check_points(data):
    """Validate a data set and return it as a float ``(N, D)`` array.

    Rejects non-2d input, empty axes, non-finite entries, and zero rows
    (a zero point has an undefined direction and breaks every quadratic
    form the estimator relies on).
    """
    points = np.asarray(data, dtype=float)
    if points.ndim != 2:
        raise ValueError(f"expected a 2-d array of row points, got ndim={points.ndim}")
    n, dim = points.shape
    if n < 1 or dim < 1:
        raise ValueError(f"data must contain at least one point, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise ValueError("data has non-finite entries")
    row_norms = np.linalg.norm(points, axis=1)
    if np.any(row_norms == 0.0):
        bad = int(np.flatnonzero(row_norms == 0.0)[0])
        raise ValueError(f"data contains the zero point at row {bad}")
    return points


def _checked_sigma(sigma, dim):
    sigma = ensure_symmetric(sigma)
    if sigma.shape[0] != dim:
        raise ValueError(
            f"shape mismatch: sigma is {sigma.shape[0]}-dimensional, data is {dim}-dimensional"
        )
    return sigma


def _quad_forms(lower, points):
    # x' inv(sigma) x == |solve(L, x)|^2 for the Cholesky factor L of sigma;
    # sigma is never inverted explicitly.  Overflow to inf is a handled
    # breakdown signal downstream, not worth a warning here.
    y = scipy.linalg.solve_triangular(lower, points.T, lower=True, check_finite=False)
    with np.errstate(over="ignore"):
        return np.sum(y * y, axis=0)


def quadratic_forms(sigma, data):
    """Evaluate ``x' inv(sigma) x`` for every row ``x`` of ``data``."""
    points = check_points(data)
    sigma = _checked_sigma(sigma, points.shape[1])
    try:
        lower = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as err:
        raise NotSPDError(f"quadratic_forms: {err}") from None
    return _quad_forms(lower, points)


def objective(sigma, data):
    """Value of the estimator's cost at ``sigma``.

    Parameters
    ----------
    sigma : ndarray, shape (D, D)
        Numerically positive definite matrix.  Any overall scale is
        accepted; the cost itself is scale invariant.
    data : array_like, shape (N, D)
        Row points, none of them zero.

    Returns
    -------
    float
        ``mean(log(x' inv(sigma) x)) + log(det(sigma)) / D``.
    """
    points = check_points(data)
    sigma = _checked_sigma(sigma, points.shape[1])
    try:
        lower = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as err:
        raise NotSPDError(f"objective: sigma is not positive definite ({err})") from None
    q = _quad_forms(lower, points)
    if not np.all(np.isfinite(q)) or np.any(q <= 0.0):
        raise NotSPDError("objective: nonpositive quadratic form, sigma is numerically singular")
    dim = points.shape[1]
    log_det = 2.0 * np.sum(np.log(np.diag(lower)))
    # fsum's correctly rounded total keeps the value independent of the
    # data ordering, bit for bit
    return float(math.fsum(np.log(q)) / points.shape[0] + log_det / dim)


def fixed_point_step(sigma, data):
    """One update of the fixed-point iteration, renormalized to trace one.

    Returns the symmetric trace-one matrix proportional to
    ``sum_x x x' / (x' inv(sigma) x)``.  The cost never increases along
    this update.

    Raises
    ------
    NotSPDError
        If ``sigma`` is not numerically positive definite.
    BreakdownError
        If some quadratic form comes out nonpositive or non-finite, the
        floating-point signal that the iteration has hit a singular
        limit.
    """
    points = check_points(data)
    sigma = _checked_sigma(sigma, points.shape[1])
    try:
        lower = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as err:
        raise NotSPDError(f"fixed_point_step: sigma is not positive definite ({err})") from None
    q = _quad_forms(lower, points)
    if not np.all(np.isfinite(q)) or np.any(q <= 0.0):
        raise BreakdownError("fixed_point_step: nonpositive quadratic form")
    weighted = (points / q[:, None]).T @ points
    weighted = (weighted + weighted.T) / 2.0
    total = np.trace(weighted)
    if not np.isfinite(total) or total <= 0.0:
        raise BreakdownError("fixed_point_step: update has no positive trace")
    return weighted / total


def breakdown_detected(sigma, data):
    """True when ``sigma`` is numerically unusable for the iteration.

    Checks the SPD threshold (eig_min > 1e-14 * eig_max), the Cholesky
    factorization, and positivity of every quadratic form.  In the
    exact-recovery regime this turns true while all quantities are
    still finite, which is why the solver can stop there and hand back
    a meaningful iterate.
    """
    points = check_points(data)
    sigma = _checked_sigma(sigma, points.shape[1])
    vals = np.linalg.eigvalsh(sigma)
    if vals[-1] <= 0.0 or vals[0] <= SPD_RTOL * vals[-1]:
        return True
    try:
        lower = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        return True
    q = _quad_forms(lower, points)
    return bool(np.any(q <= 0.0) or not np.all(np.isfinite(q)))


def estimate(data, config=None, keep_iterates=False):
    """Run the fixed-point iteration from ``identity / D`` to termination.

    Parameters
    ----------
    data : array_like, shape (N, D)
        Row points, none of them zero.
    config : EstimatorConfig, optional
        Stopping rule and breakdown handling; defaults to
        ``tol=1e-8, max_iter=1000, breakdown_check=True``.
    keep_iterates : bool
        Also store every iterate (including the initializer) on the
        result.  Needed by the convergence experiment; off by default
        to keep memory flat.

    Returns
    -------
    EstimateResult
        Final iterate, termination reason, iteration count, and a
        per-iteration trace of ``(k, objective, rel_step, eig_min)``.
        The objective entries never increase and the final relative
        step is below ``tol`` exactly when the run converged.

    Notes
    -----
    Breakdown is a successful termination: when the iterates collapse
    toward a singular matrix (the exact-recovery regime), the result
    carries the last finite usable iterate, whose top eigenspace is the
    recovered subspace.
    """
    points = check_points(data)
    if config is None:
        config = EstimatorConfig()
    dim = points.shape[1]

    sigma = np.eye(dim) / dim
    lower = np.linalg.cholesky(sigma)
    q = _quad_forms(lower, points)
    trace: list[IterationRecord] = []
    iterates: list[np.ndarray] | None = [sigma.copy()] if keep_iterates else None
    termination = Termination.MAX_ITERATIONS
    iterations = 0

    for k in range(1, config.max_iter + 1):
        weighted = (points / q[:, None]).T @ points
        weighted = (weighted + weighted.T) / 2.0
        total = np.trace(weighted)
        if not np.isfinite(total) or total <= 0.0:
            termination = Termination.BREAKDOWN
            break
        candidate = weighted / total

        rel_step = float(
            np.linalg.norm(candidate - sigma) / np.linalg.norm(candidate)
        )
        vals = np.linalg.eigvalsh(candidate)
        usable = True
        try:
            lower = np.linalg.cholesky(candidate)
            q = _quad_forms(lower, points)
            if not np.all(np.isfinite(q)) or np.any(q <= 0.0):
                usable = False
        except np.linalg.LinAlgError:
            usable = False
        if not usable:
            # keep the previous iterate, the last one finite arithmetic could use
            termination = Termination.BREAKDOWN
            break

        cost = float(
            np.mean(np.log(q)) + 2.0 * np.sum(np.log(np.diag(lower))) / dim
        )
        sigma = candidate
        iterations = k
        trace.append(IterationRecord(k, cost, rel_step, float(vals[0])))
        if keep_iterates:
            iterates.append(sigma.copy())

        if rel_step < config.tol:
            termination = Termination.CONVERGED
            break
        if config.breakdown_check and vals[0] <= SPD_RTOL * vals[-1]:
            termination = Termination.BREAKDOWN
            break

    return EstimateResult(
        sigma=sigma,
        termination=termination,
        iterations=iterations,
        trace=trace,
        iterates=iterates,
    )
