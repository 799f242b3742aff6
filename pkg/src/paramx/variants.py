"""
Restricted skew parameterizations and their mapping onto the canonical form.

The five published forms differ only in how the skewness vector is scaled:

    tag   canonical δ
    ---   -----------
    B, P  δ
    A     D·δ_A          D = diag(√Σ₁₁, …, √Σ_pp)
    G     Σ·δ_G
    SNI   Σ^{1/2}·δ_S    symmetric square root
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from ..custom_types import FloatArray, Representation, VariantTag
from ..exceptions import InfeasibleSkewnessError
from ..numerics.densities import check_dof
from ..numerics.linalg import as_vector, chol, chol_solve, solve_lower, symmetric_power
from ..skewdist.params import CanonicalRestrictedParams, SampleBatch
from ..skewdist.sampling import sample


def spd_sqrt(sigma: ArrayLike) -> FloatArray:
    """
    Unique symmetric positive definite square root, S·S = Σ.

    Raises:
        NotPositiveDefiniteError: If sigma is not SPD
    """
    return symmetric_power(sigma, 0.5, "sigma")


def _marginal_scales(sigma: FloatArray) -> FloatArray:
    return np.asarray(np.sqrt(np.diag(sigma)))


def skewing_variance(
    tag: VariantTag, sigma: FloatArray, factor: FloatArray, skew: FloatArray
) -> float:
    """The variance term each variant's density requires to be positive."""
    if tag is VariantTag.A:
        scales = _marginal_scales(sigma)
        w = solve_lower(chol(sigma / np.outer(scales, scales), "R"), skew)
        return float(1.0 - w @ w)
    if tag is VariantTag.G:
        spread = factor.T @ skew
        return float(1.0 - spread @ spread)
    if tag is VariantTag.SNI:
        return float(1.0 - skew @ skew)
    w = solve_lower(factor, skew)
    return float(1.0 - w @ w)


@dataclass(frozen=True, eq=False)
class VariantParams:
    """
    A restricted skew normal or skew t in one of the published parameterizations.

    Args:
        tag: Parameterization (A, B, G, P or SNI)
        mu: Location vector (p,)
        sigma: Scale matrix (p, p)
        skew: δ_A, δ, δ_G, δ or δ_S according to ``tag``
        nu: Degrees of freedom, or None for the skew normal

    Raises:
        InfeasibleSkewnessError: If the tag's skewing variance is not positive
    """

    tag: VariantTag
    mu: FloatArray
    sigma: FloatArray
    skew: FloatArray
    nu: float | None = None
    sigma_chol: FloatArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        tag = VariantTag(self.tag)
        factor = chol(self.sigma, "sigma")
        p = factor.shape[0]
        skew = as_vector(self.skew, p, "skew")
        sigma = factor @ factor.T
        variance = skewing_variance(tag, sigma, factor, skew)
        if not variance > 0.0:
            raise InfeasibleSkewnessError(
                f"variant {tag.value} skewness is outside its feasible region",
                tag=tag.value,
                value=variance,
            )
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "mu", as_vector(self.mu, p, "mu"))
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "skew", skew)
        object.__setattr__(self, "sigma_chol", factor)
        if self.nu is not None:
            object.__setattr__(self, "nu", check_dof(self.nu))

    @property
    def dim(self) -> int:
        return int(self.mu.shape[0])


def to_canonical(variant: VariantParams) -> CanonicalRestrictedParams:
    """
    Map a variant onto the canonical (B) parameterization.

    Examples:
        A with Σ = diag(4, 9), δ_A = (0.1, 0.2) maps to δ = (0.2, 0.6).
    """
    tag = variant.tag
    if tag is VariantTag.A:
        delta = _marginal_scales(variant.sigma) * variant.skew
    elif tag is VariantTag.G:
        delta = variant.sigma @ variant.skew
    elif tag is VariantTag.SNI:
        delta = spd_sqrt(variant.sigma) @ variant.skew
    else:
        delta = variant.skew.copy()
    return CanonicalRestrictedParams(variant.mu, variant.sigma, delta, variant.nu)


def from_canonical(
    canonical: CanonicalRestrictedParams, target: VariantTag | str
) -> VariantParams:
    """Express canonical parameters in the ``target`` parameterization."""
    tag = VariantTag(target)
    delta = canonical.delta
    if tag is VariantTag.A:
        skew = delta / _marginal_scales(canonical.sigma)
    elif tag is VariantTag.G:
        skew = chol_solve(canonical.sigma_chol, delta)
    elif tag is VariantTag.SNI:
        skew = symmetric_power(canonical.sigma, -0.5, "sigma") @ delta
    else:
        skew = delta.copy()
    return VariantParams(tag, canonical.mu, canonical.sigma, skew, canonical.nu)


def sample_variant(
    variant: VariantParams,
    n: int,
    representation: Representation = Representation.CONVOLUTION,
    seed: int = 0,
) -> SampleBatch:
    """Draw from a variant through its canonical equivalent."""
    return sample(to_canonical(variant), n, representation, seed)
