"""Linear subspaces: orthonormal bases, projectors, and recovery error.

A subspace is identified with its orthogonal projector, so the natural
error between two of them is the Frobenius distance of projectors,
which is basis independent.
"""

from __future__ import annotations

import warnings
from functools import cached_property

import numpy as np

from .estimator import check_points
from .geometry import sym_eigendecompose

__all__ = [
    "AmbiguousSubspaceWarning",
    "Subspace",
    "top_d_subspace",
    "recovery_error",
    "pca_subspace",
    "distance_to_subspace",
    "subspace_members",
    "span_of_points",
]

# Basis Gram deviation up to this is re-orthonormalized, beyond it rejected.
ORTHONORMALITY_TOL = 1e-8
# Eigenvalues closer than this across the cut make the subspace ambiguous.
EIGENGAP_TOL = 1e-12
# A point belongs to a subspace when its residual is below this, relative
# to its norm.
MEMBERSHIP_RTOL = 1e-9
# Singular values below this fraction of the largest do not count toward
# numerical rank.
RANK_RTOL = 1e-10


class AmbiguousSubspaceWarning(UserWarning):
    """The eigenvalues across the requested cut are (numerically) equal."""


class Subspace:
    """A ``dim``-dimensional linear subspace of R^``ambient_dim``.

    Parameters
    ----------
    basis : ndarray, shape (ambient_dim, dim)
        Columns spanning the subspace.  They must be orthonormal up to
        a Gram deviation of 1e-8; visible drift is repaired with a QR
        factorization, larger deviations raise ``ValueError``.
        Deviation at working precision is left alone, so a stored basis
        reads back bit for bit.
    """

    def __init__(self, basis):
        basis = np.asarray(basis, dtype=float)
        if basis.ndim != 2:
            raise ValueError(f"basis must be 2-d, got ndim={basis.ndim}")
        ambient, dim = basis.shape
        if not 1 <= dim <= ambient:
            raise ValueError(
                f"need 1 <= dim <= ambient_dim, got basis shape {basis.shape}"
            )
        if not np.all(np.isfinite(basis)):
            raise ValueError("basis has non-finite entries")
        gram = basis.T @ basis
        deviation = np.linalg.norm(gram - np.eye(dim))
        if deviation > ORTHONORMALITY_TOL:
            raise ValueError(
                f"basis columns are not orthonormal (Gram deviation {deviation:.3e})"
            )
        if deviation > 1e-12:
            basis, _ = np.linalg.qr(basis)
        self.basis = basis

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @cached_property
    def projector(self):
        """Orthogonal projector onto the subspace, exactly symmetric."""
        proj = self.basis @ self.basis.T
        return (proj + proj.T) / 2.0

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def top_d_subspace(sigma, d):
    """Span of the top ``d`` eigenvectors of a symmetric matrix.

    Warns with :class:`AmbiguousSubspaceWarning` when the eigenvalues on
    either side of the cut agree to within 1e-12, in which case the
    returned span is an arbitrary resolution of a genuinely ambiguous
    choice.
    """
    vals, vecs = sym_eigendecompose(sigma)
    ambient = vals.shape[0]
    if not 1 <= d <= ambient:
        raise ValueError(f"need 1 <= d <= {ambient}, got d={d}")
    if d < ambient and vals[d - 1] - vals[d] <= EIGENGAP_TOL:
        warnings.warn(
            f"eigenvalues {d} and {d + 1} agree to within {EIGENGAP_TOL:g}; "
            "the top eigenspace is not well defined",
            AmbiguousSubspaceWarning,
            stacklevel=2,
        )
    return Subspace(vecs[:, :d])


def recovery_error(s1, s2):
    """Frobenius distance between the projectors of two subspaces.

    Basis independent.  For equal-dimension subspaces this equals
    ``sqrt(2 d - 2 |b1' b2|_F^2)`` and ranges from 0 (same subspace)
    to ``sqrt(2 d)`` (orthogonal subspaces).
    """
    if s1.ambient_dim != s2.ambient_dim:
        raise ValueError(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )
    return float(np.linalg.norm(s1.projector - s2.projector))


def pca_subspace(data, d, center=False):
    """Top-``d`` eigenspace of the second-moment matrix of ``data``.

    With ``center=True`` the sample mean is removed first, making this
    ordinary PCA; the default keeps raw second moments, which is what
    the recovery experiments compare against.
    """
    points = check_points(data)
    if center:
        points = points - points.mean(axis=0)
    moment = points.T @ points / points.shape[0]
    return top_d_subspace(moment, d)


def distance_to_subspace(x, subspace):
    """Euclidean distance from the point ``x`` to the subspace."""
    x = np.asarray(x, dtype=float)
    if x.shape != (subspace.ambient_dim,):
        raise ValueError(
            f"expected a point of shape ({subspace.ambient_dim},), got {x.shape}"
        )
    if not np.all(np.isfinite(x)):
        raise ValueError("point has non-finite entries")
    coeffs = subspace.basis.T @ x
    return float(np.linalg.norm(x - subspace.basis @ coeffs))


def subspace_members(points, subspace, rtol=MEMBERSHIP_RTOL):
    """Boolean mask of the rows of ``points`` lying in the subspace.

    A row counts as a member when its residual against the subspace is
    at most ``rtol`` times its norm.
    """
    points = check_points(points)
    if points.shape[1] != subspace.ambient_dim:
        raise ValueError(
            f"points live in dimension {points.shape[1]}, "
            f"subspace in {subspace.ambient_dim}"
        )
    residual = points - (points @ subspace.basis) @ subspace.basis.T
    return np.linalg.norm(residual, axis=1) <= rtol * np.linalg.norm(points, axis=1)


def span_of_points(points):
    """Numerical span of a set of row points.

    Returns ``(rank, basis)`` where ``basis`` has shape
    ``(ambient_dim, rank)`` with orthonormal columns.  Rank counts the
    singular values above 1e-10 times the largest one; a rank of zero
    (all rows numerically zero) returns an empty basis.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError(f"expected a 2-d array of row points, got ndim={points.ndim}")
    u, s, _ = np.linalg.svd(points.T, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return 0, np.empty((points.shape[1], 0))
    rank = int(np.sum(s > RANK_RTOL * s[0]))
    return rank, u[:, :rank]
