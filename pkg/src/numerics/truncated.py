"""
Moments and inverse-CDF samplers for normal and t variables truncated to
the positive half-line.

All functions broadcast over array-valued ``mu``, ``var`` and ``nu``.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..custom_types import FloatArray
from ..exceptions import InvalidDofError, InvalidVarianceError, MomentUndefinedError

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class TruncMoments:
    """
    First two moments of X given X > 0.

    Args:
        m1: E[X | X > 0]
        m2: E[X² | X > 0]
    """

    m1: float | FloatArray
    m2: float | FloatArray

    @property
    def variance(self) -> float | FloatArray:
        return self.m2 - np.square(self.m1)


def _check_variance(var: ArrayLike) -> FloatArray:
    v = np.asarray(var, dtype=float)
    if np.any(~(v > 0.0)) or np.any(~np.isfinite(v)):
        raise InvalidVarianceError("var must be finite and > 0")
    return v


def _check_positive_dof(nu: ArrayLike) -> FloatArray:
    n = np.asarray(nu, dtype=float)
    if np.any(~(n > 0.0)):
        raise InvalidDofError("nu must be > 0")
    return n


def _pack(m1: FloatArray, m2: FloatArray, scalar: bool) -> TruncMoments:
    m2 = np.maximum(m2, m1 * m1)
    if scalar:
        return TruncMoments(float(m1), float(m2))
    return TruncMoments(m1, m2)


def _t_logpdf(x: FloatArray, nu: FloatArray) -> FloatArray:
    return np.asarray(
        special.gammaln(0.5 * (nu + 1.0))
        - special.gammaln(0.5 * nu)
        - 0.5 * np.log(nu * math.pi)
        - 0.5 * (nu + 1.0) * np.log1p(x * x / nu)
    )


def trunc_norm_moments(mu: ArrayLike, var: ArrayLike) -> TruncMoments:
    """
    E[X | X>0] and E[X² | X>0] for X ~ N(mu, var).

    Uses the inverse Mills ratio λ = φ(c)/Φ(c) with c = mu/σ, evaluated in
    log space: m1 = mu + σλ, m2 = mu² + var + mu·σ·λ.

    Raises:
        InvalidVarianceError: If var <= 0
    """
    scalar = np.ndim(mu) == 0 and np.ndim(var) == 0
    v = _check_variance(var)
    m = np.asarray(mu, dtype=float)
    sd = np.sqrt(v)
    c = m / sd
    mills = np.exp(-0.5 * c * c - _HALF_LOG_2PI - special.log_ndtr(c))
    m1 = m + sd * mills
    m2 = m * m + v + m * sd * mills
    return _pack(np.asarray(m1), np.asarray(m2), scalar)


def _upper_t_integrals(
    c: FloatArray, nu: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """
    Return (P(T > -c), ∫_{-c}^∞ t f_ν(t) dt) for a standard t variable T.
    """
    a = -c
    tail = special.stdtr(nu, c)
    first = np.exp(_t_logpdf(a, nu)) * (nu + a * a) / (nu - 1.0)
    return np.asarray(tail), np.asarray(first)


def trunc_t_mean(mu: ArrayLike, var: ArrayLike, nu: ArrayLike) -> float | FloatArray:
    """
    E[X | X>0] for X = mu + sqrt(var)·T, T ~ t_ν; requires ν > 1.

    Raises:
        MomentUndefinedError: If ν <= 1
    """
    scalar = np.ndim(mu) == 0 and np.ndim(var) == 0 and np.ndim(nu) == 0
    v = _check_variance(var)
    n = _check_positive_dof(nu)
    if np.any(n <= 1.0):
        raise MomentUndefinedError("the truncated t mean needs nu > 1", order=1)
    m = np.asarray(mu, dtype=float)
    sd = np.sqrt(v)
    if np.all(np.isinf(n)):
        return trunc_norm_moments(mu, var).m1
    tail, first = _upper_t_integrals(m / sd, n)
    result = m + sd * first / tail
    return float(result) if scalar else np.asarray(result)


def trunc_t_moments(mu: ArrayLike, var: ArrayLike, nu: ArrayLike) -> TruncMoments:
    """
    First two moments of X = mu + sqrt(var)·T given X > 0, T ~ t_ν.

    With a = -mu/σ and S_ν the upper tail,

        E[T 1{T>a}]  = f_ν(a)(ν + a²)/(ν - 1)
        E[T² 1{T>a}] = a·f_ν(a)(ν + a²)/(ν - 1)
                       + ν/(ν - 2) · S_{ν-2}(a·sqrt((ν - 2)/ν))

    and both are divided by S_ν(a). An infinite ν gives the normal moments.

    Raises:
        InvalidVarianceError: If var <= 0
        InvalidDofError: If ν <= 0
        MomentUndefinedError: If ν <= 2
    """
    scalar = np.ndim(mu) == 0 and np.ndim(var) == 0 and np.ndim(nu) == 0
    v = _check_variance(var)
    n = _check_positive_dof(nu)
    if np.any(n <= 2.0):
        raise MomentUndefinedError(
            "the truncated t second moment needs nu > 2", order=2
        )
    if np.all(np.isinf(n)):
        return trunc_norm_moments(mu, var)
    m = np.asarray(mu, dtype=float)
    m, v, n = np.broadcast_arrays(m, v, n)
    sd = np.sqrt(v)
    c = m / sd
    tail, first = _upper_t_integrals(c, n)
    second = -c * first + n / (n - 2.0) * special.stdtr(
        n - 2.0, c * np.sqrt((n - 2.0) / n)
    )
    et = first / tail
    et2 = second / tail
    m1 = m + sd * et
    m2 = m * m + 2.0 * m * sd * et + v * et2
    return _pack(np.asarray(m1), np.asarray(m2), scalar)


def truncated_normal_ppf(u: ArrayLike, loc: ArrayLike, scale: ArrayLike) -> FloatArray:
    """
    Quantile function of N(loc, scale²) truncated to (0, ∞), at u in [0, 1).

    Inverts the upper tail in log space so far-negative locations keep
    precision.
    """
    loc_arr = np.asarray(loc, dtype=float)
    scale_arr = np.asarray(scale, dtype=float)
    log_tail = np.log1p(-np.asarray(u, dtype=float))
    log_tail = log_tail + special.log_ndtr(loc_arr / scale_arr)
    x = loc_arr - scale_arr * special.ndtri_exp(log_tail)
    return np.asarray(np.maximum(x, 0.0))


def truncated_t_ppf(
    u: ArrayLike, loc: ArrayLike, scale: ArrayLike, nu: ArrayLike
) -> FloatArray:
    """Quantile function of loc + scale·t_ν truncated to (0, ∞), at u in [0, 1)."""
    loc_arr = np.asarray(loc, dtype=float)
    scale_arr = np.asarray(scale, dtype=float)
    nu_arr = np.asarray(nu, dtype=float)
    mass = special.stdtr(nu_arr, loc_arr / scale_arr)
    tail = (1.0 - np.asarray(u, dtype=float)) * mass
    x = loc_arr - scale_arr * special.stdtrit(nu_arr, tail)
    return np.asarray(np.maximum(x, 0.0))


def sample_truncated_normal(
    loc: ArrayLike,
    scale: ArrayLike,
    size: int | tuple[int, ...],
    rng: np.random.Generator,
) -> FloatArray:
    """Draw from N(loc, scale²) truncated to (0, ∞) by inversion."""
    return truncated_normal_ppf(rng.random(size), loc, scale)


def sample_truncated_t(
    loc: ArrayLike,
    scale: ArrayLike,
    nu: ArrayLike,
    size: int | tuple[int, ...],
    rng: np.random.Generator,
) -> FloatArray:
    """Draw from loc + scale·t_ν truncated to (0, ∞) by inversion."""
    return truncated_t_ppf(rng.random(size), loc, scale, nu)
