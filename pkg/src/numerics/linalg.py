"""
Symmetric-positive-definite helpers.

Everything downstream works with lower Cholesky factors: log-determinants,
Mahalanobis distances and solves all go through ``scipy.linalg``.
"""

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg

from ..custom_types import FloatArray
from ..exceptions import DimensionMismatchError, NotPositiveDefiniteError

SYMMETRY_RTOL = 1e-12


def as_spd(matrix: ArrayLike, name: str = "matrix") -> FloatArray:
    """
    Validate a square symmetric matrix and return a symmetrized float copy.

    A scalar is accepted as a 1×1 matrix. Symmetry is checked to
    ``SYMMETRY_RTOL`` relative to the largest absolute entry; positive
    definiteness is left to ``chol``.

    Raises:
        DimensionMismatchError: If the input is not square
        NotPositiveDefiniteError: If the input is not finite or not symmetric
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatchError(
            f"{name} must be a non-empty square matrix, got shape {a.shape}",
            shape=a.shape,
        )
    if not np.all(np.isfinite(a)):
        raise NotPositiveDefiniteError(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > SYMMETRY_RTOL * scale:
        raise NotPositiveDefiniteError(f"{name} is not symmetric")
    return 0.5 * (a + a.T)


def chol(spd: ArrayLike, name: str = "matrix") -> FloatArray:
    """
    Lower Cholesky factor L with L·Lᵀ equal to the input.

    Args:
        spd: Symmetric positive definite matrix (or positive scalar)
        name: Name used in error messages

    Returns:
        FloatArray: Lower-triangular factor

    Raises:
        NotPositiveDefiniteError: If any pivot is not strictly positive
    """
    a = as_spd(spd, name)
    try:
        factor = linalg.cholesky(a, lower=True, check_finite=False)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(
            f"{name} is not positive definite", reason=str(e)
        ) from e
    if not np.all(np.diag(factor) > 0.0):
        raise NotPositiveDefiniteError(f"{name} has a non-positive pivot")
    return np.asarray(factor, dtype=float)


def solve_lower(factor: FloatArray, rhs: ArrayLike) -> FloatArray:
    """Solve L·x = rhs for lower-triangular L."""
    return np.asarray(
        linalg.solve_triangular(factor, rhs, lower=True, check_finite=False),
        dtype=float,
    )


def chol_solve(factor: FloatArray, rhs: ArrayLike) -> FloatArray:
    """Solve A·x = rhs given the lower Cholesky factor of A."""
    return np.asarray(
        linalg.cho_solve((factor, True), rhs, check_finite=False), dtype=float
    )


def logdet_from_chol(factor: FloatArray) -> float:
    return float(2.0 * np.sum(np.log(np.diag(factor))))


def mahalanobis_sq(diff: FloatArray, factor: FloatArray) -> FloatArray:
    """Squared Mahalanobis distance of each row of ``diff``."""
    z = solve_lower(factor, diff.T)
    return np.asarray(np.sum(z * z, axis=0), dtype=float)


def symmetric_power(spd: ArrayLike, power: float, name: str = "matrix") -> FloatArray:
    """
    Spectral power of an SPD matrix, e.g. ``power=0.5`` for the symmetric root.

    Raises:
        NotPositiveDefiniteError: If an eigenvalue is not strictly positive
    """
    a = as_spd(spd, name)
    eigenvalues, eigenvectors = linalg.eigh(a, check_finite=False)
    if not np.all(eigenvalues > 0.0):
        raise NotPositiveDefiniteError(
            f"{name} is not positive definite",
            min_eigenvalue=float(np.min(eigenvalues)),
        )
    result = (eigenvectors * eigenvalues**power) @ eigenvectors.T
    return np.asarray(0.5 * (result + result.T), dtype=float)


def as_vector(values: ArrayLike, dim: int, name: str = "vector") -> FloatArray:
    """Coerce to a 1-D float vector of length ``dim``."""
    v = np.atleast_1d(np.asarray(values, dtype=float))
    if v.ndim != 1 or v.shape[0] != dim:
        raise DimensionMismatchError(
            f"{name} must have length {dim}, got shape {v.shape}",
            expected=dim,
            shape=v.shape,
        )
    return v


def as_rows(y: ArrayLike, dim: int, name: str = "y") -> tuple[FloatArray, bool]:
    """
    Coerce evaluation points to an n×dim matrix.

    A 1-D input of length ``dim`` (or a scalar when ``dim == 1``) is a single
    point; for ``dim == 1`` any other 1-D input is read as n points.

    Returns:
        tuple[FloatArray, bool]: (rows, single) where ``single`` says the
        caller should return a scalar
    """
    a = np.asarray(y, dtype=float)
    if a.ndim == 0:
        if dim != 1:
            raise DimensionMismatchError(f"{name} must have length {dim}")
        return a.reshape(1, 1), True
    if a.ndim == 1:
        if a.shape[0] == dim:
            return a.reshape(1, dim), True
        if dim == 1:
            return a.reshape(-1, 1), False
    elif a.ndim == 2 and a.shape[1] == dim:
        return a, False
    raise DimensionMismatchError(
        f"{name} has shape {a.shape}, expected trailing dimension {dim}",
        expected=dim,
        shape=a.shape,
    )
