"""Affine-invariant geometry on symmetric positive definite matrices.

All operations work on plain ``(D, D)`` numpy arrays.  Matrix functions
(square root, fractional powers, logarithm) are evaluated through a
symmetric eigendecomposition: eigensolve, transform the eigenvalues,
recompose.  Inputs are symmetrized on entry when the asymmetry is small
numerical drift and rejected otherwise.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "NotSPDError",
    "ensure_symmetric",
    "is_numerically_spd",
    "sym_eigendecompose",
    "spd_sqrt",
    "spd_distance",
    "geodesic",
    "geometric_mean",
]

# Relative asymmetry above this is an error, below it is absorbed by averaging.
SYMMETRY_RTOL = 1e-12
# A symmetric matrix counts as numerically positive definite when
# eig_min > SPD_RTOL * eig_max.
SPD_RTOL = 1e-14


class NotSPDError(ValueError):
    """A matrix that had to be positive definite is not (numerically)."""


def ensure_symmetric(mat, rtol=SYMMETRY_RTOL):
    """Return the symmetrized copy of ``mat``, rejecting real asymmetry.

    Parameters
    ----------
    mat : ndarray, shape (D, D)
        Square matrix with finite entries.
    rtol : float
        Maximum allowed asymmetry, relative to the Frobenius norm of
        ``mat``.

    Returns
    -------
    ndarray, shape (D, D)
        ``(mat + mat.T) / 2``, which is exactly symmetric entrywise.

    Raises
    ------
    ValueError
        If ``mat`` is not square, has non-finite entries, or deviates
        from symmetry by more than ``rtol`` in relative Frobenius norm.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix has non-finite entries")
    scale = np.linalg.norm(mat)
    drift = np.linalg.norm(mat - mat.T)
    if drift > rtol * max(scale, np.finfo(float).tiny):
        raise ValueError(
            f"matrix is not symmetric (relative asymmetry {drift / scale:.3e})"
        )
    return (mat + mat.T) / 2.0


def sym_eigendecompose(mat):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Parameters
    ----------
    mat : ndarray, shape (D, D)
        Symmetric matrix (small asymmetry is averaged away).

    Returns
    -------
    eigenvalues : ndarray, shape (D,)
        Real eigenvalues sorted in descending order.
    eigenvectors : ndarray, shape (D, D)
        Orthonormal eigenvectors as columns, ``eigenvectors[:, i]``
        matching ``eigenvalues[i]``.
    """
    mat = ensure_symmetric(mat)
    vals, vecs = np.linalg.eigh(mat)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def _spd_eigendecompose(mat, what):
    """Eigendecompose and verify numerical positive definiteness."""
    vals, vecs = sym_eigendecompose(mat)
    if vals[0] <= 0.0 or vals[-1] <= SPD_RTOL * vals[0]:
        raise NotSPDError(
            f"{what}: matrix is not numerically positive definite "
            f"(eig_min={vals[-1]:.3e}, eig_max={vals[0]:.3e})"
        )
    return vals, vecs


def is_numerically_spd(mat):
    """True when ``mat`` is symmetric with eig_min > 1e-14 * eig_max."""
    try:
        _spd_eigendecompose(mat, "is_numerically_spd")
    except (ValueError, np.linalg.LinAlgError):
        return False
    return True


def _recompose(vals, vecs):
    out = (vecs * vals) @ vecs.T
    return (out + out.T) / 2.0


def spd_sqrt(mat):
    """Principal matrix square root of an SPD matrix.

    Parameters
    ----------
    mat : ndarray, shape (D, D)
        Numerically positive definite matrix.

    Returns
    -------
    ndarray, shape (D, D)
        The SPD matrix ``R`` with ``R @ R == mat``.
    """
    vals, vecs = _spd_eigendecompose(mat, "spd_sqrt")
    return _recompose(np.sqrt(vals), vecs)


def _spd_power(mat, t):
    """Fractional power ``mat ** t`` of an SPD matrix."""
    vals, vecs = _spd_eigendecompose(mat, "spd_power")
    return _recompose(vals**t, vecs)


def spd_distance(s1, s2):
    """Affine-invariant distance between two SPD matrices.

    Computed as the Frobenius norm of the matrix logarithm of the
    whitened matrix, i.e. the root sum of squared logs of the
    generalized eigenvalues of ``(s2, s1)``.

    Parameters
    ----------
    s1, s2 : ndarray, shape (D, D)
        Numerically positive definite matrices of equal shape.

    Returns
    -------
    float
        The distance.  Zero exactly when ``s1 == s2``; invariant under
        congruence ``s -> a @ s @ a.T`` by any invertible ``a``.
    """
    s1 = ensure_symmetric(s1)
    s2 = ensure_symmetric(s2)
    if s1.shape != s2.shape:
        raise ValueError(f"shape mismatch: {s1.shape} vs {s2.shape}")
    _spd_eigendecompose(s1, "spd_distance")
    _spd_eigendecompose(s2, "spd_distance")
    w = scipy.linalg.eigvalsh(s2, s1)
    if np.any(w <= 0.0):
        raise NotSPDError("spd_distance: generalized eigenvalues not positive")
    return float(np.sqrt(np.sum(np.log(w) ** 2)))


def geodesic(s1, s2, t):
    """Point on the affine-invariant geodesic from ``s1`` to ``s2``.

    Evaluates ``s1^(1/2) (s1^(-1/2) s2 s1^(-1/2))^t s1^(1/2)`` for a
    parameter ``t`` in ``[0, 1]``.

    Parameters
    ----------
    s1, s2 : ndarray, shape (D, D)
        Numerically positive definite endpoints.
    t : float
        Position along the curve; 0 gives ``s1``, 1 gives ``s2``.

    Returns
    -------
    ndarray, shape (D, D)
        SPD matrix on the curve.
    """
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"geodesic parameter must lie in [0, 1], got {t}")
    s1 = ensure_symmetric(s1)
    s2 = ensure_symmetric(s2)
    if s1.shape != s2.shape:
        raise ValueError(f"shape mismatch: {s1.shape} vs {s2.shape}")
    vals, vecs = _spd_eigendecompose(s1, "geodesic")
    root = _recompose(np.sqrt(vals), vecs)
    inv_root = _recompose(1.0 / np.sqrt(vals), vecs)
    middle = inv_root @ s2 @ inv_root
    middle = (middle + middle.T) / 2.0
    powered = _spd_power(middle, t)
    out = root @ powered @ root
    return (out + out.T) / 2.0


def geometric_mean(s1, s2):
    """Geodesic midpoint of two SPD matrices.

    The unique SPD matrix ``m`` with ``m @ inv(s1) @ m == s2``; its log
    determinant is the average of the endpoints' log determinants, and
    it is symmetric in its arguments.
    """
    return geodesic(s1, s2, 0.5)
