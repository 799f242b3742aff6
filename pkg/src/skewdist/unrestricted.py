"""
Unrestricted skew normal and skew t log-densities.

The skewing factor is a p-dimensional distribution function, estimated with
the randomized lattice from ``numerics.mvcdf``. Every result carries the
standard error of the log-density induced by that estimate; for p = 1 the
factor is exact and the error is zero.
"""

import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..custom_types import FloatArray
from ..exceptions import ParameterError
from ..numerics.densities import log_t_cdf, mvn_logpdf_chol, mvt_logpdf_chol
from ..numerics.linalg import as_rows, solve_lower
from ..numerics.mvcdf import MIN_CDF_DRAWS, CdfBatch, mvn_cdf_many, mvt_cdf_many
from .params import UnrestrictedParams
from .restricted import t_skew_scale

LOG_2 = math.log(2.0)


class LogDensity(NamedTuple):
    """
    Log-density value with the standard error of its Monte-Carlo part.

    Attributes:
        value: Log-density at each point (float for a single point)
        se: Standard error of ``value``
    """

    value: float | FloatArray
    se: float | FloatArray


def log_cdf_terms(batch: CdfBatch) -> tuple[FloatArray, FloatArray]:
    """Log of a CDF estimate and its delta-method standard error."""
    with np.errstate(divide="ignore", invalid="ignore"):
        log_value = np.log(batch.estimate)
        se = np.where(batch.estimate > 0.0, batch.se / batch.estimate, np.inf)
    return np.asarray(log_value), np.asarray(se)


def skewing_uppers(rows: FloatArray, params: UnrestrictedParams) -> FloatArray:
    """Rows of ΔΣ⁻¹(y−μ), one per observation."""
    factor = params.sigma_chol
    z = solve_lower(factor, (rows - params.mu).T)
    w = solve_lower(factor, params.delta_matrix)
    return np.asarray((w.T @ z).T)


def unrestricted_logpdf_rows(
    rows: FloatArray,
    params: UnrestrictedParams,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> tuple[FloatArray, FloatArray]:
    """
    Row-wise unrestricted log-density and its standard error.

    Returns:
        tuple[FloatArray, FloatArray]: (values, se) of length n
    """
    p = params.dim
    factor = params.sigma_chol
    uppers = skewing_uppers(rows, params)
    nu = params.nu
    if nu is None:
        base = mvn_logpdf_chol(rows, params.mu, factor)
    else:
        base = mvt_logpdf_chol(rows, params.mu, factor, nu)
        z = solve_lower(factor, (rows - params.mu).T)
        uppers = uppers * t_skew_scale(np.sum(z * z, axis=0), nu, p)[:, None]

    lam = params.lambda_matrix
    if p == 1:
        standardized = uppers[:, 0] / math.sqrt(lam[0, 0])
        if nu is None:
            log_cdf = special.log_ndtr(standardized)
        else:
            log_cdf = log_t_cdf(standardized, nu + p)
        return np.asarray(LOG_2 + base + log_cdf), np.zeros(rows.shape[0])

    if nu is None:
        batch = mvn_cdf_many(uppers, lam, draws, seed)
    else:
        batch = mvt_cdf_many(uppers, lam, nu + p, draws, seed)
    log_cdf, se = log_cdf_terms(batch)
    return np.asarray(p * LOG_2 + base + log_cdf), se


def _evaluate(
    y: ArrayLike, params: UnrestrictedParams, draws: int, seed: int
) -> LogDensity:
    rows, single = as_rows(y, params.dim)
    values, se = unrestricted_logpdf_rows(rows, params, draws, seed)
    if single:
        return LogDensity(float(values[0]), float(se[0]))
    return LogDensity(values, se)


def umsn_logpdf(
    y: ArrayLike,
    params: UnrestrictedParams,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> LogDensity:
    """
    Unrestricted multivariate skew normal log-density.

    log of 2^p·φ_p(y; μ, Σ)·Φ_p(ΔΣ⁻¹(y−μ); 0, Λ) with Λ = I − ΔΣ⁻¹Δ.

    Args:
        y: Point (p,) or points (n, p)
        params: Unrestricted parameters without ``nu``
        draws: Lattice points for the p-variate normal CDF
        seed: Seed for the lattice shifts

    Returns:
        LogDensity: (value, se)

    Raises:
        DimensionTooLargeError: If p > 6
    """
    if params.nu is not None:
        raise ParameterError("umsn_logpdf takes skew normal parameters (nu=None)")
    return _evaluate(y, params, draws, seed)


def umst_logpdf(
    y: ArrayLike,
    params: UnrestrictedParams,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> LogDensity:
    """
    Unrestricted multivariate skew t log-density.

    log of 2^p·t_p(y; μ, Σ, ν)·T_p(ΔΣ⁻¹(y−μ)·√((ν+p)/(ν+d(y))); 0, Λ, ν+p).
    """
    if params.nu is None:
        raise ParameterError("umst_logpdf needs degrees of freedom (nu)")
    return _evaluate(y, params, draws, seed)
