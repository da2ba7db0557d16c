"""Seeded synthetic data sets: subspace inliers plus cube outliers.

Inliers are standard gaussian inside a chosen subspace, outliers are
uniform in the unit cube of the ambient space, and an optional
isotropic gaussian perturbation can be added to every point.  All draws
come from numpy's default PCG64 generator seeded with the model's seed,
so a model reproduces its data set bit for bit on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .estimator import check_points
from .oracles import iter_subsets
from .subspace import RANK_RTOL, Subspace, subspace_members

__all__ = [
    "SyntheticModel",
    "generate",
    "spherical_projection",
    "general_position_check",
]


@dataclass(frozen=True)
class SyntheticModel:
    """Recipe for one synthetic data set.

    Attributes
    ----------
    ambient_dim : int
        Dimension of the ambient space.
    subspace_dim : int
        Dimension of the inlier subspace, between 1 and ``ambient_dim``.
        A pure-outlier set is requested with ``n_inliers=0``, not with a
        zero-dimensional subspace.
    n_inliers, n_outliers : int
        Point counts; at least one point in total.
    noise : float
        Standard deviation of the isotropic gaussian added to every
        point; 0 leaves points exact.
    seed : int
        Seed of the generator stream.
    rotate : bool
        With the default ``False`` the inlier subspace is the span of
        the first ``subspace_dim`` coordinates.  With ``True`` it is a
        seeded random rotation of that span.
    """

    ambient_dim: int
    subspace_dim: int
    n_inliers: int
    n_outliers: int
    noise: float = 0.0
    seed: int = 0
    rotate: bool = False

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError(f"ambient_dim must be positive, got {self.ambient_dim}")
        if not 1 <= self.subspace_dim <= self.ambient_dim:
            raise ValueError(
                f"need 1 <= subspace_dim <= ambient_dim, got "
                f"subspace_dim={self.subspace_dim}, ambient_dim={self.ambient_dim}"
            )
        if self.n_inliers < 0 or self.n_outliers < 0:
            raise ValueError("point counts cannot be negative")
        if self.n_inliers + self.n_outliers < 1:
            raise ValueError("the data set must contain at least one point")
        if not (np.isfinite(self.noise) and self.noise >= 0.0):
            raise ValueError(f"noise must be finite and nonnegative, got {self.noise}")

    @cached_property
    def truth(self):
        """The inlier subspace this model generates around."""
        return Subspace(_truth_basis(self, np.random.default_rng(self.seed)))


def _truth_basis(model, rng):
    """Draw (or fix) the inlier basis, consuming the rotation draw if any."""
    if not model.rotate:
        return np.eye(model.ambient_dim)[:, : model.subspace_dim]
    square = rng.standard_normal((model.ambient_dim, model.ambient_dim))
    q, r = np.linalg.qr(square)
    # fix the sign convention so the rotation is a deterministic
    # function of the gaussian draw
    q = q * np.sign(np.diag(r))
    return q[:, : model.subspace_dim]


def generate(model):
    """Draw the data set described by ``model``.

    Returns
    -------
    points : ndarray, shape (n_inliers + n_outliers, ambient_dim)
        Inlier rows first, then outlier rows.
    truth : Subspace
        The inlier subspace.

    Notes
    -----
    The stream order is fixed: rotation basis (if ``rotate``), inlier
    gaussians, outlier uniforms, then one noise block for all points
    when ``noise > 0``.  Tests and experiments rely on this order, so a
    given model is bit-reproducible.
    """
    rng = np.random.default_rng(model.seed)
    basis = _truth_basis(model, rng)
    blocks = []
    if model.n_inliers:
        coords = rng.standard_normal((model.n_inliers, model.subspace_dim))
        blocks.append(coords @ basis.T)
    if model.n_outliers:
        blocks.append(rng.random((model.n_outliers, model.ambient_dim)))
    points = np.vstack(blocks)
    if model.noise > 0.0:
        points = points + model.noise * rng.standard_normal(points.shape)
    return check_points(points), Subspace(basis)


def spherical_projection(data):
    """Scale every point to unit norm.

    The estimator's update and minimizer do not depend on point
    magnitudes, so this changes neither; it is useful for conditioning
    data sets with wildly mixed scales.
    """
    points = check_points(data)
    return points / np.linalg.norm(points, axis=1)[:, None]


def general_position_check(data, truth, seed=0):
    """Check the in-subspace/off-subspace points for degenerate subsets.

    Splits the data by membership in ``truth``, maps members to their
    coordinates inside the subspace and the rest to coordinates in its
    orthogonal complement, and verifies that every k-subset on each
    side spans k dimensions (k up to the side's dimension).  Subset
    enumeration is exhaustive up to 1e5 subsets per size, after which
    1e4 random subsets are tested instead, making a pass probabilistic.
    """
    points = check_points(data)
    if points.shape[1] != truth.ambient_dim:
        raise ValueError(
            f"points live in dimension {points.shape[1]}, "
            f"subspace in {truth.ambient_dim}"
        )
    inside = subspace_members(points, truth)
    member_coords = points[inside] @ truth.basis
    complement = _complement_basis(truth)
    rest_coords = points[~inside] @ complement

    rng = np.random.default_rng(seed)
    return _all_subsets_full_rank(member_coords, rng) and _all_subsets_full_rank(
        rest_coords, rng
    )


def _complement_basis(subspace):
    """Orthonormal basis of the orthogonal complement, possibly empty."""
    ambient, dim = subspace.basis.shape
    if dim == ambient:
        return np.empty((ambient, 0))
    full, _ = np.linalg.qr(subspace.basis, mode="complete")
    return full[:, dim:]


def _all_subsets_full_rank(coords, rng):
    n, dim = coords.shape
    if n == 0 or dim == 0:
        return True
    for k in range(1, min(n, dim) + 1):
        _, subsets = iter_subsets(n, [k], rng=rng)
        for idx in subsets:
            block = coords[list(idx)]
            s = np.linalg.svd(block, compute_uv=False)
            if s[0] == 0.0 or np.sum(s > RANK_RTOL * s[0]) < k:
                return False
    return True
