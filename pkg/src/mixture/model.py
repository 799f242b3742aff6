"""
Finite mixtures of skew normal and skew t components.

f(y; Ψ) = Σ_h π_h f(y; θ_h), with every component drawn from the same family.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from ..custom_types import DofPolicy, Family, FloatArray, IntArray, Representation
from ..exceptions import AllZeroLikelihoodError, DimensionMismatchError, ParameterError
from ..numerics.densities import logsumexp
from ..numerics.linalg import as_rows
from ..numerics.mvcdf import MIN_CDF_DRAWS
from ..skewdist.params import CanonicalRestrictedParams, UnrestrictedParams
from ..skewdist.restricted import restricted_logpdf_rows
from ..skewdist.sampling import draw
from ..skewdist.unrestricted import unrestricted_logpdf_rows

logger = logging.getLogger(__name__)

ComponentParams = CanonicalRestrictedParams | UnrestrictedParams

WEIGHT_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """
    Mixture weights plus one parameter set per component.

    Args:
        family: Component family
        weights: Mixing proportions π (g,), non-negative and summing to one
        components: Component parameters, restricted or unrestricted per family
        dof_policy: Whether components share one degrees-of-freedom value

    Raises:
        ParameterError: If the weights are not a simplex vector or a component
            does not belong to the family
        DimensionMismatchError: If components disagree on dimension
    """

    family: Family
    weights: FloatArray
    components: tuple[ComponentParams, ...]
    dof_policy: DofPolicy = DofPolicy.PER_COMPONENT
    dim: int = field(init=False)

    def __post_init__(self) -> None:
        family = Family(self.family)
        components = tuple(self.components)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(components) == 0 or weights.shape[0] != len(components):
            raise ParameterError(
                "need one weight per component",
                weights=weights.shape[0],
                components=len(components),
            )
        if np.any(~np.isfinite(weights)) or np.any(weights < 0.0):
            raise ParameterError("mixing weights must be finite and >= 0")
        total = float(weights.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ParameterError(f"mixing weights sum to {total}, not 1", total=total)

        expected = (
            CanonicalRestrictedParams if family.is_restricted else UnrestrictedParams
        )
        for h, component in enumerate(components):
            if not isinstance(component, expected):
                raise ParameterError(
                    f"component {h} is {type(component).__name__}, "
                    f"family {family.value} needs {expected.__name__}"
                )
            if component.is_skew_t != family.is_skew_t:
                raise ParameterError(
                    f"component {h} degrees of freedom do not match {family.value}"
                )
        dims = {component.dim for component in components}
        if len(dims) != 1:
            raise DimensionMismatchError("components disagree on dimension")
        policy = DofPolicy(self.dof_policy)
        if family.is_skew_t and policy is DofPolicy.SHARED:
            if len({component.nu for component in components}) != 1:
                raise ParameterError(
                    "shared dof policy needs equal nu across components"
                )

        object.__setattr__(self, "family", family)
        object.__setattr__(self, "weights", weights / total)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "dof_policy", policy)
        object.__setattr__(self, "dim", dims.pop())

    @property
    def g(self) -> int:
        return len(self.components)

    @property
    def nus(self) -> list[float | None]:
        return [component.nu for component in self.components]

    def permuted(self, order: Sequence[int]) -> "MixtureModel":
        """Same model with components (and weights) reordered."""
        index = list(order)
        return MixtureModel(
            self.family,
            self.weights[index],
            tuple(self.components[i] for i in index),
            self.dof_policy,
        )


def component_logpdf(
    rows: FloatArray,
    component: ComponentParams,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> FloatArray:
    """Row-wise log-density of one component."""
    if isinstance(component, CanonicalRestrictedParams):
        return restricted_logpdf_rows(rows, component)
    values, _ = unrestricted_logpdf_rows(rows, component, draws, seed)
    return values


def weighted_logpdf_matrix(
    rows: FloatArray,
    model: MixtureModel,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> FloatArray:
    """
    n×g matrix of log π_h + log f(y_j; θ_h).

    Unrestricted components use lattice seed ``seed + h``.
    """
    columns = []
    with np.errstate(divide="ignore"):
        for h, component in enumerate(model.components):
            log_weight = np.log(model.weights[h])
            density = component_logpdf(rows, component, draws, seed + h)
            columns.append(log_weight + density)
    return np.column_stack(columns)


def mixture_logpdf(
    y: ArrayLike,
    model: MixtureModel,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> float | FloatArray:
    """
    Log of Σ_h π_h f(y; θ_h), computed with logsumexp.

    Args:
        y: Point (p,) or points (n, p)
        model: Mixture model
        draws: Lattice points for unrestricted components
        seed: Lattice seed for unrestricted components

    Returns:
        float | FloatArray: Mixture log-density at each point
    """
    rows, single = as_rows(y, model.dim)
    weighted = weighted_logpdf_matrix(rows, model, draws, seed)
    values = np.asarray(logsumexp(weighted, axis=1))
    return float(values[0]) if single else values


def normalize_log_weights(weighted: FloatArray) -> tuple[FloatArray, FloatArray]:
    """
    Responsibilities and per-row log-likelihood from an n×g log-weight matrix.

    Raises:
        AllZeroLikelihoodError: If some row has zero likelihood under every
            component even in log space
    """
    row_log = np.asarray(logsumexp(weighted, axis=1)).reshape(-1)
    bad = ~np.isfinite(row_log)
    if np.any(bad):
        rows = np.flatnonzero(bad)
        raise AllZeroLikelihoodError(
            f"{rows.size} observation(s) have zero likelihood under every component",
            first_row=int(rows[0]),
        )
    z = np.exp(weighted - row_log[:, None])
    z /= z.sum(axis=1, keepdims=True)
    return z, row_log


def responsibilities(
    data: ArrayLike,
    model: MixtureModel,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> FloatArray:
    """
    Posterior component probabilities z_hj ∝ π_h f(y_j; θ_h), rows summing to one.

    Raises:
        AllZeroLikelihoodError: If a row underflows under every component
    """
    rows, _ = as_rows(data, model.dim, "data")
    z, _ = normalize_log_weights(weighted_logpdf_matrix(rows, model, draws, seed))
    return z


def sample_mixture(
    model: MixtureModel,
    n: int,
    seed: int = 0,
    representation: Representation = Representation.CONVOLUTION,
) -> tuple[FloatArray, IntArray]:
    """
    Draw n rows and their component labels.

    Labels are drawn first; components are then filled in index order from
    the same generator.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}", n=n)
    rng = np.random.default_rng(seed)
    labels = rng.choice(model.g, size=n, p=model.weights)
    rows = np.empty((n, model.dim))
    for h, component in enumerate(model.components):
        mask = labels == h
        count = int(mask.sum())
        if count:
            rows[mask] = draw(component, count, representation, rng)
    logger.debug(
        f"Drew {n} rows from a {model.g}-component {model.family.value} mixture"
    )
    return rows, labels.astype(np.int64)
