"""
Extended, unified and canonical fundamental skew normal log-densities.
"""

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..numerics.densities import mvn_logpdf_chol
from ..numerics.linalg import as_rows, solve_lower
from ..numerics.mvcdf import MIN_CDF_DRAWS, mvn_cdf, mvn_cdf_many
from .params import CanonicalRestrictedParams, ExtendedParams
from .restricted import skew_terms
from .unrestricted import LogDensity, log_cdf_terms


def esn_logpdf(
    y: ArrayLike, mu: ArrayLike, sigma: ArrayLike, delta: ArrayLike, tau: float
) -> float | np.ndarray:
    """
    Extended skew normal log-density.

    φ_p(y; μ, Σ)·Φ₁(τ + δᵀΣ⁻¹(y−μ); 0, 1−δᵀΣ⁻¹δ) / Φ₁(τ); τ = 0 gives the
    restricted skew normal.

    Raises:
        InfeasibleSkewnessError: If 1 − δᵀΣ⁻¹δ <= 0
    """
    params = CanonicalRestrictedParams(mu, sigma, delta)
    rows, single = as_rows(y, params.dim)
    terms = skew_terms(rows, params.mu, params.sigma_chol, params.delta)
    shift = float(tau)
    values = (
        mvn_logpdf_chol(rows, params.mu, params.sigma_chol)
        + special.log_ndtr((shift + terms.arg) / math.sqrt(terms.variance))
        - special.log_ndtr(shift)
    )
    return float(values[0]) if single else np.asarray(values)


def _log_normalizer(
    params: ExtendedParams, draws: int, seed: int
) -> tuple[float, float]:
    """log Φ_q(τ; 0, Γ) and its standard error."""
    q = params.latent_dim
    gamma = params.Gamma
    tau = params.tau
    if q == 1:
        return float(special.log_ndtr(tau[0] / math.sqrt(gamma[0, 0]))), 0.0
    off_diagonal = gamma - np.diag(np.diag(gamma))
    if not np.any(tau) and not np.any(off_diagonal):
        return -q * math.log(2.0), 0.0
    estimate = mvn_cdf(tau, gamma, draws, seed)
    return math.log(estimate.estimate), estimate.se / estimate.estimate


def sun_logpdf(
    y: ArrayLike,
    params: ExtendedParams,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> LogDensity:
    """
    Unified skew normal log-density.

    φ_p(y; μ, Σ)·Φ_q(τ + ΔᵀΣ⁻¹(y−μ); 0, Γ − ΔᵀΣ⁻¹Δ) / Φ_q(τ; 0, Γ). Both
    distribution functions are exact for q = 1; otherwise their standard
    errors are combined into ``se``.

    Raises:
        DimensionTooLargeError: If q > 6
    """
    rows, single = as_rows(y, params.dim)
    factor = params.sigma_chol
    z = solve_lower(factor, (rows - params.mu).T)
    w = solve_lower(factor, params.Delta)
    uppers = (w.T @ z).T + params.tau
    base = mvn_logpdf_chol(rows, params.mu, factor)
    cond = params.conditional_cov

    if params.latent_dim == 1:
        log_num = special.log_ndtr(uppers[:, 0] / math.sqrt(cond[0, 0]))
        se_num = np.zeros(rows.shape[0])
    else:
        log_num, se_num = log_cdf_terms(mvn_cdf_many(uppers, cond, draws, seed))
    log_den, se_den = _log_normalizer(params, draws, seed + 1)

    values = np.asarray(base + log_num - log_den)
    se = np.asarray(np.sqrt(se_num**2 + se_den**2))
    if single:
        return LogDensity(float(values[0]), float(se[0]))
    return LogDensity(values, se)


def cfusn_logpdf(
    y: ArrayLike,
    mu: ArrayLike,
    sigma: ArrayLike,
    Delta: ArrayLike,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> LogDensity:
    """
    Canonical fundamental skew normal log-density.

    2^q·φ_p(y; μ, Σ)·Φ_q(ΔᵀΣ⁻¹(y−μ); 0, I_q − ΔᵀΣ⁻¹Δ) for a p×q matrix Δ.

    Raises:
        InfeasibleSkewnessError: If I_q − ΔᵀΣ⁻¹Δ is not SPD
    """
    return sun_logpdf(y, ExtendedParams.cfusn(mu, sigma, Delta), draws, seed)
