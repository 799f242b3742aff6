"""
Conversion between conditioning-type and convolution-type parameters.

In the convolution form Y = μ + δ̃|U₀| + U₁ with U₁ ~ N(0, Σ̃); the two
parameter sets are linked by δ̃ = δ and Σ̃ = Σ − δδᵀ (restricted) or
Σ̃ = Σ − Δ² (unrestricted).
"""

from dataclasses import dataclass, field

import numpy as np

from ..custom_types import FloatArray
from ..exceptions import InfeasibleSkewnessError, NotPositiveDefiniteError
from ..numerics.densities import check_dof
from ..numerics.linalg import as_vector, chol
from ..skewdist.params import CanonicalRestrictedParams, UnrestrictedParams


@dataclass(frozen=True, eq=False)
class ConvolutionParams:
    """
    Convolution-type parameters (μ, Σ̃, δ̃, ν).

    Raises:
        NotPositiveDefiniteError: If sigma_tilde is not SPD
    """

    mu: FloatArray
    sigma_tilde: FloatArray
    delta_tilde: FloatArray
    nu: float | None = None
    sigma_tilde_chol: FloatArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        factor = chol(self.sigma_tilde, "sigma_tilde")
        p = factor.shape[0]
        object.__setattr__(self, "sigma_tilde", factor @ factor.T)
        object.__setattr__(self, "mu", as_vector(self.mu, p, "mu"))
        object.__setattr__(self, "delta_tilde", as_vector(self.delta_tilde, p, "delta"))
        object.__setattr__(self, "sigma_tilde_chol", factor)
        if self.nu is not None:
            object.__setattr__(self, "nu", check_dof(self.nu))

    @property
    def dim(self) -> int:
        return int(self.mu.shape[0])


def _downdate(
    mu: FloatArray, sigma_tilde: FloatArray, delta: FloatArray, nu: float | None
) -> ConvolutionParams:
    try:
        return ConvolutionParams(mu, 0.5 * (sigma_tilde + sigma_tilde.T), delta, nu)
    except NotPositiveDefiniteError as e:
        raise InfeasibleSkewnessError(
            "Sigma minus the skewness outer product is not SPD"
        ) from e


def conditioning_to_convolution(
    params: CanonicalRestrictedParams,
) -> ConvolutionParams:
    """
    δ̃ = δ, Σ̃ = Σ − δδᵀ.

    Examples:
        Σ = I₂, δ = (0.6, 0) gives Σ̃ = [[0.64, 0], [0, 1]].

    Raises:
        InfeasibleSkewnessError: If Σ − δδᵀ is not SPD
    """
    return _downdate(params.mu, params.sigma_tilde, params.delta, params.nu)


def convolution_to_conditioning(
    params: ConvolutionParams,
) -> CanonicalRestrictedParams:
    """Σ = Σ̃ + δ̃δ̃ᵀ; always feasible."""
    delta = params.delta_tilde
    sigma = params.sigma_tilde + np.outer(delta, delta)
    return CanonicalRestrictedParams(params.mu, sigma, delta, params.nu)


def unrestricted_to_convolution(params: UnrestrictedParams) -> ConvolutionParams:
    """δ̃ = δ, Σ̃ = Σ − Δ² with Δ = diag(δ)."""
    return _downdate(params.mu, params.sigma_tilde, params.delta, params.nu)


def convolution_to_unrestricted(params: ConvolutionParams) -> UnrestrictedParams:
    """Σ = Σ̃ + Δ²."""
    delta = params.delta_tilde
    sigma = params.sigma_tilde + np.diag(delta**2)
    return UnrestrictedParams(params.mu, sigma, delta, params.nu)
