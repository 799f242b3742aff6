"""
Random generation for every skew family through either stochastic
representation.

All families are drawn from one latent scheme. With a q-dimensional latent
Y₀ and joint normal (Y₀, Y₁) ~ N(0, [[Γ, Δᵀ], [Δ, Σ]]):

* conditioning: Y = μ + (Y₁ | Y₀ + τ > 0), by rejection;
* convolution:  Y = μ + ΔΓ⁻¹(V − τ) + ε with V ~ N(τ, Γ) truncated to the
  positive orthant and ε ~ N(0, Σ − ΔΓ⁻¹Δᵀ).

The restricted families have q = 1, Δ = δ; the unrestricted ones q = p,
Δ = diag(δ); both with Γ = I and τ = 0. Skew t draws divide the skewed part
by √W with W ~ Gamma(ν/2, rate ν/2) shared across the joint vector.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..custom_types import FloatArray, Representation
from ..exceptions import ParameterError, RejectionBudgetExceededError
from ..numerics.linalg import chol, chol_solve
from ..numerics.truncated import sample_truncated_normal
from .params import (
    CanonicalRestrictedParams,
    ExtendedParams,
    SampleBatch,
    UnrestrictedParams,
)

logger = logging.getLogger(__name__)

SkewParams = CanonicalRestrictedParams | UnrestrictedParams | ExtendedParams

REJECTION_TRIALS_PER_DRAW = 100


@dataclass(frozen=True)
class _Latent:
    mu: FloatArray
    sigma: FloatArray
    skew: FloatArray
    gamma: FloatArray
    tau: FloatArray
    nu: float | None

    @property
    def q(self) -> int:
        return int(self.skew.shape[1])

    @property
    def standard(self) -> bool:
        """True when τ = 0 and Γ is diagonal, so the latent is half-normal."""
        off_diagonal = self.gamma - np.diag(np.diag(self.gamma))
        return not np.any(self.tau) and not np.any(off_diagonal)


def _latent(params: SkewParams) -> _Latent:
    if isinstance(params, CanonicalRestrictedParams):
        return _Latent(
            params.mu,
            params.sigma,
            params.delta.reshape(-1, 1),
            np.eye(1),
            np.zeros(1),
            params.nu,
        )
    if isinstance(params, UnrestrictedParams):
        p = params.dim
        return _Latent(
            params.mu,
            params.sigma,
            params.delta_matrix,
            np.eye(p),
            np.zeros(p),
            params.nu,
        )
    if isinstance(params, ExtendedParams):
        return _Latent(
            params.mu, params.sigma, params.Delta, params.Gamma, params.tau, None
        )
    raise ParameterError(f"cannot sample from {type(params).__name__}")


def _gamma_scale(nu: float | None, n: int, rng: np.random.Generator) -> FloatArray:
    """1/√W per draw, or ones for the skew normal."""
    if nu is None or math.isinf(nu):
        return np.ones(n)
    weights = rng.gamma(shape=0.5 * nu, scale=2.0 / nu, size=n)
    return np.asarray(1.0 / np.sqrt(weights))


def _budget(q: int, n: int) -> int:
    return REJECTION_TRIALS_PER_DRAW * (2**q) * n


def _reject(
    factor: FloatArray,
    tau: FloatArray,
    n: int,
    rng: np.random.Generator,
    mean: FloatArray | None = None,
) -> FloatArray:
    """
    Draw n joint normals whose first q coordinates satisfy x + τ > 0.

    Raises:
        RejectionBudgetExceededError: If more than 100·2^q trials per draw
            are needed
    """
    q = tau.shape[0]
    dim = factor.shape[0]
    budget = _budget(q, n)
    accepted: list[FloatArray] = []
    have = 0
    trials = 0
    while have < n:
        remaining = budget - trials
        if remaining <= 0:
            raise RejectionBudgetExceededError(
                f"rejection sampler exceeded {budget} trials for {n} draws",
                trials=trials,
                accepted=have,
                latent_dim=q,
            )
        size = min(remaining, max(64, (2**q) * (n - have) + 16))
        draws = rng.standard_normal((size, dim)) @ factor.T
        if mean is not None:
            draws = draws + mean
        trials += size
        keep = np.all(draws[:, :q] + tau > 0.0, axis=1)
        accepted.append(draws[keep])
        have += int(keep.sum())
    logger.debug(f"Rejection sampler accepted {have} of {trials} trials")
    return np.concatenate(accepted)[:n]


def _by_conditioning(latent: _Latent, n: int, rng: np.random.Generator) -> FloatArray:
    q = latent.q
    joint = np.block([[latent.gamma, latent.skew.T], [latent.skew, latent.sigma]])
    factor = chol(joint, "joint covariance")
    body = _reject(factor, latent.tau, n, rng)[:, q:]
    return latent.mu + body * _gamma_scale(latent.nu, n, rng)[:, None]


def _positive_latent(latent: _Latent, n: int, rng: np.random.Generator) -> FloatArray:
    """V ~ N(τ, Γ) truncated to the positive orthant."""
    q = latent.q
    if q == 1:
        scale = math.sqrt(latent.gamma[0, 0])
        return sample_truncated_normal(latent.tau[0], scale, n, rng).reshape(-1, 1)
    if latent.standard:
        return np.abs(rng.standard_normal((n, q))) * np.sqrt(np.diag(latent.gamma))
    return _reject(chol(latent.gamma, "Gamma"), np.zeros(q), n, rng, latent.tau)


def _by_convolution(latent: _Latent, n: int, rng: np.random.Generator) -> FloatArray:
    gamma_factor = chol(latent.gamma, "Gamma")
    loading = chol_solve(gamma_factor, latent.skew.T).T
    noise_cov = latent.sigma - loading @ latent.skew.T
    noise_factor = chol(0.5 * (noise_cov + noise_cov.T), "noise covariance")
    v = _positive_latent(latent, n, rng)
    noise = rng.standard_normal((n, latent.sigma.shape[0])) @ noise_factor.T
    body = (v - latent.tau) @ loading.T + noise
    return latent.mu + body * _gamma_scale(latent.nu, n, rng)[:, None]


def draw(
    params: SkewParams,
    n: int,
    representation: Representation,
    rng: np.random.Generator,
) -> FloatArray:
    """
    Draw an n×p matrix from ``params`` using an existing generator.

    Raises:
        ParameterError: If n < 1
        RejectionBudgetExceededError: If rejection runs out of trials
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}", n=n)
    latent = _latent(params)
    if Representation(representation) is Representation.CONDITIONING:
        return _by_conditioning(latent, n, rng)
    return _by_convolution(latent, n, rng)


def sample(
    params: SkewParams,
    n: int,
    representation: Representation = Representation.CONVOLUTION,
    seed: int = 0,
) -> SampleBatch:
    """
    Draw n rows from a skew distribution; identical seeds give identical rows.

    Args:
        params: Restricted, unrestricted or extended parameters
        n: Number of rows (>= 1)
        representation: Conditioning (rejection) or convolution form
        seed: Seed for ``numpy.random.default_rng``

    Returns:
        SampleBatch: The rows and their provenance
    """
    rng = np.random.default_rng(seed)
    rows = draw(params, n, representation, rng)
    return SampleBatch(rows, seed, Representation(representation))


def shard_sizes(n: int, shards: int) -> list[int]:
    """Split n rows into near-equal parts; earlier shards take the remainder."""
    base, extra = divmod(n, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def sample_sharded(
    params: SkewParams,
    n: int,
    representation: Representation = Representation.CONVOLUTION,
    seed: int = 0,
    shards: int = 1,
) -> SampleBatch:
    """
    Draw n rows in independent shards.

    Shard i draws its rows from ``default_rng(SeedSequence([seed, i]))`` so the
    result depends only on (seed, shards), never on how shards are scheduled.
    """
    if shards < 1 or shards > n:
        raise ParameterError(
            f"shards must be between 1 and n={n}, got {shards}", shards=shards
        )
    parts = []
    for i, size in enumerate(shard_sizes(n, shards)):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        parts.append(draw(params, size, representation, rng))
    return SampleBatch(np.vstack(parts), seed, Representation(representation), shards)
