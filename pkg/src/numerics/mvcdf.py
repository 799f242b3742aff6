"""
Low-dimensional multivariate normal and t distribution functions.

Both use separation-of-variables quadrature over a randomly shifted rank-1
lattice. The t case integrates the normal probability against a chi
variable, ``T_p(b) = E_s[Φ_p(s·b)]`` with ``s = sqrt(χ²_ν / ν)``, which
adds one lattice coordinate. The standard error comes from the spread of the
independent random shifts, so results are reproducible for a fixed seed.
"""

import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..custom_types import FloatArray
from ..exceptions import DimensionTooLargeError, InvalidDrawCountError
from .densities import check_dof
from .linalg import as_rows, chol

MAX_CDF_DIM = 6
MIN_CDF_DRAWS = 10_000
N_SHIFTS = 16
_PRIMES = (2, 3, 5, 7, 11, 13, 17)
_CHUNK_ELEMENTS = 1 << 21
_TINY = 1e-300


class CdfEstimate(NamedTuple):
    estimate: float
    se: float


class CdfBatch(NamedTuple):
    estimate: FloatArray
    se: FloatArray


def _lattice_generator(dims: int) -> FloatArray:
    return np.asarray(np.sqrt(np.array(_PRIMES[:dims], dtype=float)) % 1.0)


def _orthant_sweep(
    upper: FloatArray,
    factor: FloatArray,
    uniforms: FloatArray,
    chi_scale: FloatArray | None,
) -> FloatArray:
    """
    Average the separation-of-variables integrand over one set of points.

    Args:
        upper: (m, p) upper limits
        factor: (p, p) lower Cholesky factor
        uniforms: (N, p) lattice points in the unit cube
        chi_scale: (N,) chi scale factors, or None for the normal case

    Returns:
        FloatArray: (m,) integrand averages
    """
    m, p = upper.shape
    n_points = uniforms.shape[0]
    if chi_scale is None:
        limits = np.broadcast_to(upper[:, None, :], (m, 1, p))
    else:
        with np.errstate(invalid="ignore"):
            limits = upper[:, None, :] * chi_scale[None, :, None]
        limits = np.where(np.isnan(limits), 0.0, limits)
    latent = np.zeros((m, n_points, p))
    weight = np.ones((m, n_points))
    for i in range(p):
        shift = latent[..., :i] @ factor[i, :i]
        e = special.ndtr((limits[..., i] - shift) / factor[i, i])
        weight *= e
        if i < p - 1:
            prob = np.clip(uniforms[:, i] * e, _TINY, 1.0 - 1e-16)
            latent[..., i] = special.ndtri(prob)
    return np.asarray(weight.mean(axis=1), dtype=float)


def _randomized_lattice(
    upper: FloatArray, factor: FloatArray, nu: float | None, draws: int, seed: int
) -> CdfBatch:
    m, p = upper.shape
    dims = p + 1
    rng = np.random.default_rng(seed)
    shifts = rng.random((N_SHIFTS, dims))
    n_points = max(1, draws // N_SHIFTS)
    generator = _lattice_generator(dims)
    k = np.arange(1, n_points + 1, dtype=float)[:, None]
    chunk = max(1, _CHUNK_ELEMENTS // (n_points * p))

    estimates = np.empty((N_SHIFTS, m))
    for r in range(N_SHIFTS):
        points = np.abs(2.0 * ((k * generator + shifts[r]) % 1.0) - 1.0)
        chi_scale = None
        if nu is not None:
            w = np.clip(points[:, p], 1e-12, 1.0 - 1e-12)
            chi_scale = np.sqrt(special.chdtri(nu, 1.0 - w) / nu)
        for start in range(0, m, chunk):
            stop = min(m, start + chunk)
            estimates[r, start:stop] = _orthant_sweep(
                upper[start:stop], factor, points[:, :p], chi_scale
            )
    estimate = estimates.mean(axis=0)
    se = estimates.std(axis=0, ddof=1) / math.sqrt(N_SHIFTS)
    return CdfBatch(np.asarray(estimate), np.asarray(se))


def _validate(sigma: ArrayLike, draws: int) -> FloatArray:
    factor = chol(sigma, "sigma")
    p = factor.shape[0]
    if p > MAX_CDF_DIM:
        raise DimensionTooLargeError(
            f"multivariate CDF supports p <= {MAX_CDF_DIM}, got {p}",
            dim=p,
            max_dim=MAX_CDF_DIM,
        )
    if draws < MIN_CDF_DRAWS:
        raise InvalidDrawCountError(
            f"draws must be >= {MIN_CDF_DRAWS}, got {draws}", draws=draws
        )
    return factor


def mvn_cdf_many(
    upper: ArrayLike, sigma: ArrayLike, draws: int = MIN_CDF_DRAWS, seed: int = 0
) -> CdfBatch:
    """
    P(X <= upper_j) for X ~ N(0, Σ) at every row of ``upper``.

    All rows share the same lattice shifts, so differences between rows carry
    no extra Monte-Carlo noise.

    Raises:
        DimensionTooLargeError: If p > MAX_CDF_DIM
        NotPositiveDefiniteError: If sigma is not SPD
        InvalidDrawCountError: If draws < MIN_CDF_DRAWS
    """
    factor = _validate(sigma, draws)
    rows, _ = as_rows(upper, factor.shape[0], "upper")
    if factor.shape[0] == 1:
        exact = special.ndtr(rows[:, 0] / factor[0, 0])
        return CdfBatch(np.asarray(exact), np.zeros(rows.shape[0]))
    return _randomized_lattice(rows, factor, None, draws, seed)


def mvt_cdf_many(
    upper: ArrayLike,
    sigma: ArrayLike,
    nu: float,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> CdfBatch:
    """
    P(X <= upper_j) for X ~ t_p(0, Σ, ν) at every row of ``upper``.

    Raises:
        InvalidDofError: If ``nu <= 0``
        DimensionTooLargeError: If p > MAX_CDF_DIM
        NotPositiveDefiniteError: If sigma is not SPD
    """
    dof = check_dof(nu)
    if math.isinf(dof):
        return mvn_cdf_many(upper, sigma, draws, seed)
    factor = _validate(sigma, draws)
    rows, _ = as_rows(upper, factor.shape[0], "upper")
    if factor.shape[0] == 1:
        exact = special.stdtr(dof, rows[:, 0] / factor[0, 0])
        return CdfBatch(np.asarray(exact), np.zeros(rows.shape[0]))
    return _randomized_lattice(rows, factor, dof, draws, seed)


def mvn_cdf(
    upper: ArrayLike, sigma: ArrayLike, draws: int = MIN_CDF_DRAWS, seed: int = 0
) -> CdfEstimate:
    """
    Randomized-quadrature estimate of P(X <= upper), X ~ N(0, Σ).

    Args:
        upper: Upper limits (p,); ``inf`` entries are allowed
        sigma: Covariance matrix (p, p)
        draws: Total lattice points across all random shifts
        seed: Seed for the random shifts

    Returns:
        CdfEstimate: (estimate, se)
    """
    batch = mvn_cdf_many(
        np.atleast_2d(np.asarray(upper, dtype=float)), sigma, draws, seed
    )
    return CdfEstimate(float(batch.estimate[0]), float(batch.se[0]))


def mvt_cdf(
    upper: ArrayLike,
    sigma: ArrayLike,
    nu: float,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> CdfEstimate:
    """Randomized-quadrature estimate of P(X <= upper), X ~ t_p(0, Σ, ν)."""
    batch = mvt_cdf_many(
        np.atleast_2d(np.asarray(upper, dtype=float)), sigma, nu, draws, seed
    )
    return CdfEstimate(float(batch.estimate[0]), float(batch.se[0]))
