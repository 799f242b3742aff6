"""
Elliptical log-densities and univariate distribution functions.

Densities accept a single point or an n×p matrix of points and return a float
or a length-n vector accordingly.
"""

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..custom_types import FloatArray
from ..exceptions import DimensionMismatchError, EmptyInputError, InvalidDofError
from .linalg import as_rows, as_vector, chol, logdet_from_chol, mahalanobis_sq

LOG_2PI = math.log(2.0 * math.pi)


def check_dof(nu: float, name: str = "nu") -> float:
    """
    Validate degrees of freedom; ``inf`` is allowed and means the normal limit.

    Raises:
        InvalidDofError: If ``nu`` is not strictly positive
    """
    value = float(nu)
    if not value > 0.0:
        raise InvalidDofError(f"{name} must be > 0, got {nu}", nu=value)
    return value


def _finish(values: FloatArray, single: bool) -> float | FloatArray:
    return float(values[0]) if single else values


def location_scale(
    mu: ArrayLike, sigma: ArrayLike
) -> tuple[FloatArray, FloatArray]:
    """Validated location vector and lower Cholesky factor of the scale matrix."""
    factor = chol(sigma, "sigma")
    p = factor.shape[0]
    try:
        mean = as_vector(mu, p, "mu")
    except DimensionMismatchError as e:
        raise DimensionMismatchError(
            f"mu and sigma disagree: {e}", expected=p
        ) from e
    return mean, factor


def mvn_logpdf_chol(rows: FloatArray, mu: FloatArray, factor: FloatArray) -> FloatArray:
    """Row-wise normal log-density from a precomputed Cholesky factor."""
    p = factor.shape[0]
    maha = mahalanobis_sq(rows - mu, factor)
    return np.asarray(
        -0.5 * (p * LOG_2PI + logdet_from_chol(factor) + maha), dtype=float
    )


def mvt_logpdf_chol(
    rows: FloatArray, mu: FloatArray, factor: FloatArray, nu: float
) -> FloatArray:
    """Row-wise multivariate t log-density from a precomputed Cholesky factor."""
    if math.isinf(nu):
        return mvn_logpdf_chol(rows, mu, factor)
    p = factor.shape[0]
    maha = mahalanobis_sq(rows - mu, factor)
    const = (
        special.gammaln(0.5 * (nu + p))
        - special.gammaln(0.5 * nu)
        - 0.5 * p * math.log(nu * math.pi)
        - 0.5 * logdet_from_chol(factor)
    )
    return np.asarray(const - 0.5 * (nu + p) * np.log1p(maha / nu), dtype=float)


def mvn_logpdf(y: ArrayLike, mu: ArrayLike, sigma: ArrayLike) -> float | FloatArray:
    """
    Multivariate normal log-density.

    Args:
        y: Point (p,) or points (n, p)
        mu: Location vector (p,)
        sigma: Covariance matrix (p, p)

    Returns:
        float | FloatArray: Log-density at each point

    Raises:
        DimensionMismatchError: If shapes disagree
        NotPositiveDefiniteError: If sigma is not SPD
    """
    mean, factor = location_scale(mu, sigma)
    rows, single = as_rows(y, factor.shape[0])
    return _finish(mvn_logpdf_chol(rows, mean, factor), single)


def mvt_logpdf(
    y: ArrayLike, mu: ArrayLike, sigma: ArrayLike, nu: float
) -> float | FloatArray:
    """
    Multivariate t log-density with ``nu`` degrees of freedom.

    ``nu = inf`` returns the normal log-density.

    Raises:
        DimensionMismatchError: If shapes disagree
        InvalidDofError: If ``nu <= 0``
    """
    dof = check_dof(nu)
    mean, factor = location_scale(mu, sigma)
    rows, single = as_rows(y, factor.shape[0])
    return _finish(mvt_logpdf_chol(rows, mean, factor, dof), single)


def norm_cdf(x: ArrayLike) -> float | FloatArray:
    """Standard normal distribution function."""
    result = special.ndtr(np.asarray(x, dtype=float))
    return float(result) if np.ndim(result) == 0 else np.asarray(result)


def log_norm_cdf(x: ArrayLike) -> float | FloatArray:
    """Log of the standard normal distribution function, accurate in the tail."""
    result = special.log_ndtr(np.asarray(x, dtype=float))
    return float(result) if np.ndim(result) == 0 else np.asarray(result)


def t_cdf(x: ArrayLike, nu: float) -> float | FloatArray:
    """
    Standard Student t distribution function.

    Raises:
        InvalidDofError: If ``nu <= 0``
    """
    dof = check_dof(nu)
    arr = np.asarray(x, dtype=float)
    result = special.ndtr(arr) if math.isinf(dof) else special.stdtr(dof, arr)
    return float(result) if np.ndim(result) == 0 else np.asarray(result)


def log_t_cdf(x: ArrayLike, nu: ArrayLike) -> float | FloatArray:
    """
    Log of the Student t distribution function.

    ``nu`` may be an array broadcast against ``x``; the upper half uses the
    complementary tail so values near zero keep their precision.
    """
    scalar = np.ndim(x) == 0 and np.ndim(nu) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    dof = np.atleast_1d(np.asarray(nu, dtype=float))
    if np.any(~(dof > 0.0)):
        raise InvalidDofError("nu must be > 0")
    arr, dof = np.broadcast_arrays(arr, dof)
    result = np.empty(arr.shape, dtype=float)
    normal = np.isinf(dof)
    result[normal] = special.log_ndtr(arr[normal])
    finite = ~normal
    lower = finite & (arr < 0.0)
    upper = finite & ~(arr < 0.0)
    with np.errstate(divide="ignore"):
        result[lower] = np.log(special.stdtr(dof[lower], arr[lower]))
        result[upper] = np.log1p(-special.stdtr(dof[upper], -arr[upper]))
    return float(result[0]) if scalar else result


def logsumexp(values: ArrayLike, axis: int | None = None) -> float | FloatArray:
    """
    Overflow-safe log of a sum of exponentials.

    Raises:
        EmptyInputError: If ``values`` is empty
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptyInputError("logsumexp needs at least one value")
    result = special.logsumexp(arr, axis=axis)
    return float(result) if np.ndim(result) == 0 else np.asarray(result)
