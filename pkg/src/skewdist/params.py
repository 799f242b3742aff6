"""
Parameter containers for the skew normal and skew t families.

Every container validates itself on construction: the scale matrix must be
SPD and the skewness must lie inside the feasibility region of its family.
Derived factors are computed once and cached on the instance.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import ArrayLike

from ..custom_types import FloatArray, Representation
from ..exceptions import (
    DimensionMismatchError,
    InfeasibleSkewnessError,
    NotPositiveDefiniteError,
)
from ..numerics.densities import check_dof
from ..numerics.linalg import as_vector, chol, chol_solve, solve_lower


def _optional_dof(nu: float | None) -> float | None:
    return None if nu is None else check_dof(nu)


@dataclass(frozen=True, eq=False)
class CanonicalRestrictedParams:
    """
    Restricted skew normal (``nu is None``) or skew t parameters.

    The density is 2·φ_p(y; μ, Σ)·Φ₁(δᵀΣ⁻¹(y−μ); 0, 1−δᵀΣ⁻¹δ), with the t
    analogue when ``nu`` is set.

    Args:
        mu: Location vector (p,)
        sigma: Scale matrix (p, p)
        delta: Skewness vector (p,)
        nu: Degrees of freedom, or None for the skew normal

    Raises:
        NotPositiveDefiniteError: If sigma is not SPD
        InfeasibleSkewnessError: If 1 − δᵀΣ⁻¹δ <= 0
    """

    mu: FloatArray
    sigma: FloatArray
    delta: FloatArray
    nu: float | None = None
    sigma_chol: FloatArray = field(init=False, repr=False)
    skew_variance: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        factor = chol(self.sigma, "sigma")
        p = factor.shape[0]
        delta = as_vector(self.delta, p, "delta")
        object.__setattr__(self, "sigma", factor @ factor.T)
        object.__setattr__(self, "mu", as_vector(self.mu, p, "mu"))
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "nu", _optional_dof(self.nu))
        object.__setattr__(self, "sigma_chol", factor)
        w = solve_lower(factor, delta)
        variance = float(1.0 - w @ w)
        if not variance > 0.0:
            raise InfeasibleSkewnessError(
                "1 - delta' Sigma^-1 delta must be > 0", value=variance
            )
        object.__setattr__(self, "skew_variance", variance)

    @property
    def dim(self) -> int:
        return int(self.mu.shape[0])

    @property
    def is_skew_t(self) -> bool:
        return self.nu is not None

    @property
    def sigma_inv_delta(self) -> FloatArray:
        return chol_solve(self.sigma_chol, self.delta)

    @property
    def sigma_tilde(self) -> FloatArray:
        """Σ − δδᵀ, the covariance of the symmetric part in the convolution form."""
        return self.sigma - np.outer(self.delta, self.delta)

    def with_nu(self, nu: float | None) -> "CanonicalRestrictedParams":
        return replace(self, nu=nu)


@dataclass(frozen=True, eq=False)
class UnrestrictedParams:
    """
    Unrestricted skew normal or skew t parameters with Δ = diag(δ).

    Raises:
        NotPositiveDefiniteError: If sigma is not SPD
        InfeasibleSkewnessError: If Λ = I − ΔΣ⁻¹Δ is not SPD
    """

    mu: FloatArray
    sigma: FloatArray
    delta: FloatArray
    nu: float | None = None
    sigma_chol: FloatArray = field(init=False, repr=False)
    lambda_matrix: FloatArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        factor = chol(self.sigma, "sigma")
        p = factor.shape[0]
        delta = as_vector(self.delta, p, "delta")
        object.__setattr__(self, "sigma", factor @ factor.T)
        object.__setattr__(self, "mu", as_vector(self.mu, p, "mu"))
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "nu", _optional_dof(self.nu))
        object.__setattr__(self, "sigma_chol", factor)
        scaled = solve_lower(factor, np.diag(delta))
        lam = np.eye(p) - scaled.T @ scaled
        lam = 0.5 * (lam + lam.T)
        try:
            chol(lam, "Lambda")
        except NotPositiveDefiniteError as e:
            raise InfeasibleSkewnessError(
                "Lambda = I - Delta Sigma^-1 Delta must be SPD"
            ) from e
        object.__setattr__(self, "lambda_matrix", lam)

    @property
    def dim(self) -> int:
        return int(self.mu.shape[0])

    @property
    def is_skew_t(self) -> bool:
        return self.nu is not None

    @property
    def delta_matrix(self) -> FloatArray:
        return np.diag(self.delta)

    @property
    def sigma_tilde(self) -> FloatArray:
        """Σ − Δ²."""
        return self.sigma - np.diag(self.delta**2)

    def with_nu(self, nu: float | None) -> "UnrestrictedParams":
        return replace(self, nu=nu)


@dataclass(frozen=True, eq=False)
class ExtendedParams:
    """
    Unified skew normal parameters (μ, Σ, Δ, Γ, τ) with a q-dimensional latent.

    ``Gamma`` defaults to I_q and ``tau`` to zero, which gives the canonical
    fundamental skew normal; q = 1 with Γ = 1 gives the extended skew normal.

    Raises:
        NotPositiveDefiniteError: If sigma or Gamma is not SPD
        InfeasibleSkewnessError: If Γ − ΔᵀΣ⁻¹Δ is not SPD
    """

    mu: FloatArray
    sigma: FloatArray
    Delta: FloatArray
    Gamma: FloatArray | None = None
    tau: FloatArray | None = None
    sigma_chol: FloatArray = field(init=False, repr=False)
    conditional_cov: FloatArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        factor = chol(self.sigma, "sigma")
        p = factor.shape[0]
        skew = np.asarray(self.Delta, dtype=float)
        if skew.ndim == 1:
            skew = skew.reshape(-1, 1)
        if skew.ndim != 2 or skew.shape[0] != p:
            raise DimensionMismatchError(
                f"Delta must be {p}×q, got shape {skew.shape}", shape=skew.shape
            )
        q = skew.shape[1]
        gamma = np.eye(q) if self.Gamma is None else np.asarray(self.Gamma, float)
        gamma_factor = chol(gamma.reshape(q, q), "Gamma")
        tau = np.zeros(q) if self.tau is None else as_vector(self.tau, q, "tau")

        scaled = solve_lower(factor, skew)
        cond = gamma_factor @ gamma_factor.T - scaled.T @ scaled
        cond = 0.5 * (cond + cond.T)
        try:
            chol(cond, "Gamma - Delta' Sigma^-1 Delta")
        except NotPositiveDefiniteError as e:
            raise InfeasibleSkewnessError(
                "Gamma - Delta' Sigma^-1 Delta must be SPD"
            ) from e

        object.__setattr__(self, "mu", as_vector(self.mu, p, "mu"))
        object.__setattr__(self, "sigma", factor @ factor.T)
        object.__setattr__(self, "Delta", skew)
        object.__setattr__(self, "Gamma", gamma_factor @ gamma_factor.T)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "sigma_chol", factor)
        object.__setattr__(self, "conditional_cov", cond)

    @classmethod
    def esn(
        cls, mu: ArrayLike, sigma: ArrayLike, delta: ArrayLike, tau: float
    ) -> "ExtendedParams":
        """Extended skew normal: q = 1, Γ = 1."""
        return cls(mu, sigma, np.asarray(delta, float).reshape(-1, 1), np.eye(1), [tau])

    @classmethod
    def cfusn(
        cls, mu: ArrayLike, sigma: ArrayLike, Delta: ArrayLike
    ) -> "ExtendedParams":
        """Canonical fundamental skew normal: τ = 0, Γ = I_q."""
        return cls(mu, sigma, Delta)

    @property
    def dim(self) -> int:
        return int(self.mu.shape[0])

    @property
    def latent_dim(self) -> int:
        return int(self.Delta.shape[1])


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """
    Rows drawn from one distribution together with their provenance.

    Args:
        rows: n×p sample matrix
        seed: Seed the draw was made with
        representation: Stochastic representation used
        shards: Number of seed-split shards the rows were drawn in
    """

    rows: FloatArray
    seed: int
    representation: Representation
    shards: int = 1

    def __post_init__(self) -> None:
        if self.rows.ndim != 2 or self.rows.shape[0] < 1:
            raise DimensionMismatchError("a sample batch needs at least one row")

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    @property
    def dim(self) -> int:
        return int(self.rows.shape[1])
