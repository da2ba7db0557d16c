"""Certificates for the estimator's two data-set regimes.

Two combinatorial conditions on a data set decide what the estimator
does: the well-posedness condition (every proper subspace holds a
fraction of points strictly below dim/D, so the minimizer is unique and
interior) and the recovery condition (some subspace holds a fraction
strictly above dim/D, so the iterates collapse onto it).  Both are
fractions of points counted inside candidate subspaces, and a
maximizing candidate can always be taken to be the span of a subset of
the points, which is what the enumeration walks.

The majorization gap is an independent per-pair certificate of the
solver's monotone descent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.linalg

from .estimator import check_points, objective, quadratic_forms
from .geometry import ensure_symmetric
from .subspace import Subspace, span_of_points, subspace_members

__all__ = [
    "EXHAUSTIVE_LIMIT",
    "RANDOM_SUBSETS",
    "ConditionReport",
    "iter_subsets",
    "uniqueness_condition",
    "recovery_condition",
    "majorization_gap",
]

# Enumerate exhaustively while the subset count stays at or below this.
EXHAUSTIVE_LIMIT = 100_000
# Sample count for the randomized fallback on larger instances.
RANDOM_SUBSETS = 10_000


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a combinatorial certificate check.

    ``method`` is "exhaustive" when every candidate was enumerated and
    "randomized" when a sampled subset of candidates was checked (a
    probabilistic pass).  When ``holds`` is false the ``witness``
    subspace, the ``member_count`` of points found inside it, and the
    violated ``threshold`` (its dim/D bound) make the verdict
    independently recheckable.  ``fraction`` is ``member_count`` over
    the data-set size.
    """

    holds: bool
    method: str
    fraction: float | None = None
    threshold: float | None = None
    member_count: int | None = None
    witness: Subspace | None = None


def iter_subsets(n, sizes, rng=None):
    """Yield index tuples of the given subset sizes, plus the method used.

    Returns ``(method, iterator)``.  When the total number of subsets
    over all ``sizes`` is at most ``EXHAUSTIVE_LIMIT`` the iterator is
    exhaustive; otherwise it yields ``RANDOM_SUBSETS`` random subsets
    with sizes drawn uniformly from ``sizes`` (requires ``rng``).
    """
    sizes = [k for k in sizes if 1 <= k <= n]
    if not sizes:
        return "exhaustive", iter(())
    total = sum(math.comb(n, k) for k in sizes)
    if total <= EXHAUSTIVE_LIMIT:
        def exhaustive():
            for k in sizes:
                yield from combinations(range(n), k)
        return "exhaustive", exhaustive()
    if rng is None:
        raise ValueError("randomized subset sampling needs an rng")

    def sampled():
        for _ in range(RANDOM_SUBSETS):
            k = sizes[rng.integers(len(sizes))]
            yield tuple(rng.choice(n, size=k, replace=False))
    return "randomized", sampled()


def uniqueness_condition(data, seed=0):
    """Check that every proper subspace holds strictly fewer points than dim/D allows.

    Candidates are the spans of point subsets of sizes 1 through D-1; a
    subset's span uses its numerical rank, so collinear or coplanar
    subsets are tested against the bound of their actual dimension.
    The comparison ``member_count / N < rank / D`` is done in exact
    integer arithmetic.

    Exhaustive up to ``EXHAUSTIVE_LIMIT`` candidate subsets (intended
    for small N); beyond that a randomized sample of candidates is
    checked and the report says so.
    """
    points = check_points(data)
    n, dim = points.shape
    method, subsets = iter_subsets(
        n, range(1, dim), rng=np.random.default_rng(seed)
    )
    for idx in subsets:
        rank, basis = span_of_points(points[list(idx)])
        if rank == 0 or rank >= dim:
            continue
        candidate = Subspace(basis)
        count = int(np.count_nonzero(subspace_members(points, candidate)))
        # violation when count/n >= rank/dim
        if count * dim >= rank * n:
            return ConditionReport(
                holds=False,
                method=method,
                fraction=count / n,
                threshold=rank / dim,
                member_count=count,
                witness=candidate,
            )
    return ConditionReport(holds=True, method=method)


def recovery_condition(data, candidate):
    """Check that ``candidate`` holds a fraction of points strictly above dim/D."""
    points = check_points(data)
    n, dim = points.shape
    if candidate.ambient_dim != dim:
        raise ValueError(
            f"candidate lives in dimension {candidate.ambient_dim}, data in {dim}"
        )
    count = int(np.count_nonzero(subspace_members(points, candidate)))
    return ConditionReport(
        holds=bool(count * dim > candidate.dim * n),
        method="exhaustive",
        fraction=count / n,
        threshold=candidate.dim / dim,
        member_count=count,
        witness=candidate,
    )


def majorization_gap(sigma, anchor, data):
    """Gap between the quadratic surrogate anchored at ``anchor`` and the cost at ``sigma``.

    The surrogate is ``<weighted_moment(anchor), inv(sigma)> +
    log(det(sigma))/D + c`` with the constant ``c`` fixed so that the
    gap vanishes when ``sigma == anchor``.  It is nonnegative
    everywhere, which is the certificate that one fixed-point update
    never increases the cost.
    """
    points = check_points(data)
    n, dim = points.shape
    q_anchor = quadratic_forms(anchor, points)
    if not np.all(np.isfinite(q_anchor)) or np.any(q_anchor <= 0.0):
        raise ValueError("majorization_gap: anchor is numerically singular on this data")
    moment = (points / q_anchor[:, None]).T @ points / n
    moment = (moment + moment.T) / 2.0

    cost = objective(sigma, points)
    # objective() has fully validated sigma, so this factorization succeeds
    lower = np.linalg.cholesky(ensure_symmetric(sigma))
    inner = float(np.trace(scipy.linalg.cho_solve((lower, True), moment)))
    log_det = 2.0 * float(np.sum(np.log(np.diag(lower))))
    constant = float(np.mean(np.log(q_anchor))) - 1.0
    surrogate = inner + log_det / dim + constant
    return float(surrogate - cost)
