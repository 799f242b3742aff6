"""
Restricted skew normal and skew t log-densities.

The canonical form skews along a single direction δ; the published variants
(A, B, G, P, SNI) are evaluated from their own formulas so that conversions
between them can be checked against an independent computation.
"""

import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..custom_types import FloatArray, VariantTag
from ..exceptions import InfeasibleSkewnessError, ParameterError
from ..numerics.densities import log_t_cdf, mvn_logpdf_chol, mvt_logpdf_chol
from ..numerics.linalg import (
    as_rows,
    as_vector,
    chol,
    mahalanobis_sq,
    solve_lower,
    symmetric_power,
)
from .params import CanonicalRestrictedParams

if TYPE_CHECKING:
    from ..paramx.variants import VariantParams

LOG_2 = math.log(2.0)


class SkewTerms(NamedTuple):
    """
    Per-row quantities shared by the density and the E-step.

    Attributes:
        maha: d(y) = (y−μ)ᵀΣ⁻¹(y−μ)
        arg: Location of the skewing latent given y, e.g. δᵀΣ⁻¹(y−μ)
        variance: Scale of the skewing latent given y, e.g. 1 − δᵀΣ⁻¹δ
    """

    maha: FloatArray
    arg: FloatArray
    variance: float


def skew_terms(
    rows: FloatArray, mu: FloatArray, factor: FloatArray, delta: FloatArray
) -> SkewTerms:
    """Canonical skew terms from the Cholesky factor of Σ."""
    z = solve_lower(factor, (rows - mu).T)
    w = solve_lower(factor, delta)
    return SkewTerms(
        np.asarray(np.sum(z * z, axis=0)), np.asarray(w @ z), float(1.0 - w @ w)
    )


def t_skew_scale(maha: FloatArray, nu: float, p: int) -> FloatArray:
    """√((ν+p)/(ν+d(y))), or ones in the normal limit."""
    if math.isinf(nu):
        return np.ones_like(maha)
    return np.asarray(np.sqrt((nu + p) / (nu + maha)))


def _skewed(
    base: FloatArray, terms: SkewTerms, nu: float | None, p: int
) -> FloatArray:
    if not terms.variance > 0.0:
        raise InfeasibleSkewnessError(
            "skewing variance must be > 0", value=terms.variance
        )
    standardized = terms.arg / math.sqrt(terms.variance)
    if nu is None:
        return np.asarray(LOG_2 + base + special.log_ndtr(standardized))
    scaled = standardized * t_skew_scale(terms.maha, nu, p)
    return np.asarray(LOG_2 + base + log_t_cdf(scaled, nu + p))


def _base_logpdf(
    rows: FloatArray, mu: FloatArray, factor: FloatArray, nu: float | None
) -> FloatArray:
    if nu is None:
        return mvn_logpdf_chol(rows, mu, factor)
    return mvt_logpdf_chol(rows, mu, factor, nu)


def restricted_logpdf_rows(
    rows: FloatArray, params: CanonicalRestrictedParams
) -> FloatArray:
    """Row-wise restricted log-density for an n×p matrix; the family follows ``nu``."""
    factor = params.sigma_chol
    terms = skew_terms(rows, params.mu, factor, params.delta)
    base = _base_logpdf(rows, params.mu, factor, params.nu)
    return _skewed(base, terms, params.nu, params.dim)


def _finish(values: FloatArray, single: bool) -> float | FloatArray:
    return float(values[0]) if single else values


def rmsn_logpdf(y: ArrayLike, params: CanonicalRestrictedParams) -> float | FloatArray:
    """
    Restricted multivariate skew normal log-density.

    Args:
        y: Point (p,) or points (n, p)
        params: Canonical parameters without ``nu``

    Returns:
        float | FloatArray: log of 2·φ_p(y; μ, Σ)·Φ₁(δᵀΣ⁻¹(y−μ); 0, 1−δᵀΣ⁻¹δ)
    """
    if params.nu is not None:
        raise ParameterError("rmsn_logpdf takes skew normal parameters (nu=None)")
    rows, single = as_rows(y, params.dim)
    return _finish(restricted_logpdf_rows(rows, params), single)


def rmst_logpdf(y: ArrayLike, params: CanonicalRestrictedParams) -> float | FloatArray:
    """
    Restricted multivariate skew t log-density.

    The skewing factor is T₁(δᵀΣ⁻¹(y−μ)·√((ν+p)/(ν+d(y))); 0, 1−δᵀΣ⁻¹δ, ν+p).
    """
    if params.nu is None:
        raise ParameterError("rmst_logpdf needs degrees of freedom (nu)")
    rows, single = as_rows(y, params.dim)
    return _finish(restricted_logpdf_rows(rows, params), single)


def _variant_terms(
    rows: FloatArray,
    tag: VariantTag,
    mu: FloatArray,
    sigma: FloatArray,
    factor: FloatArray,
    skew: FloatArray,
) -> SkewTerms:
    diff = rows - mu
    maha = mahalanobis_sq(diff, factor)
    if tag in (VariantTag.B, VariantTag.P):
        return skew_terms(rows, mu, factor, skew)
    if tag is VariantTag.A:
        scales = np.sqrt(np.diag(sigma))
        corr_factor = chol(sigma / np.outer(scales, scales), "R")
        z = solve_lower(corr_factor, (diff / scales).T)
        w = solve_lower(corr_factor, skew)
        return SkewTerms(maha, np.asarray(w @ z), float(1.0 - w @ w))
    if tag is VariantTag.G:
        spread = factor.T @ skew
        return SkewTerms(maha, np.asarray(diff @ skew), float(1.0 - spread @ spread))
    root_inv = symmetric_power(sigma, -0.5, "sigma")
    return SkewTerms(
        maha, np.asarray(diff @ (root_inv @ skew)), float(1.0 - skew @ skew)
    )


def variant_logpdf(y: ArrayLike, variant: "VariantParams") -> float | FloatArray:
    """
    Log-density of a restricted variant, evaluated from the variant's own formula.

    A uses δ_AᵀR⁻¹D⁻¹(y−μ) with variance 1 − δ_AᵀR⁻¹δ_A, G uses δ_Gᵀ(y−μ) with
    1 − δ_GᵀΣδ_G, SNI uses δ_SᵀΣ^{-1/2}(y−μ) with 1 − δ_Sᵀδ_S, and B and P
    coincide with the canonical form. The skew t versions rescale the
    argument by √((ν+p)/(ν+d(y))) and use ν+p degrees of freedom.

    Raises:
        InfeasibleSkewnessError: If the variant's skewing variance is not positive
    """
    factor = chol(variant.sigma, "sigma")
    p = factor.shape[0]
    mu = as_vector(variant.mu, p, "mu")
    skew = as_vector(variant.skew, p, "skew")
    rows, single = as_rows(y, p)
    terms = _variant_terms(rows, variant.tag, mu, variant.sigma, factor, skew)
    base = _base_logpdf(rows, mu, factor, variant.nu)
    return _finish(_skewed(base, terms, variant.nu, p), single)
