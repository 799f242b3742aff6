"""
Family-agnostic evaluation: one entry point per parameter container, plus
linear-scale density wrappers.
"""

import numpy as np
from numpy.typing import ArrayLike

from ..custom_types import FloatArray
from ..exceptions import ParameterError
from ..numerics.linalg import as_rows
from ..numerics.mvcdf import MIN_CDF_DRAWS
from .extended import sun_logpdf
from .params import CanonicalRestrictedParams, ExtendedParams, UnrestrictedParams
from .restricted import restricted_logpdf_rows
from .sampling import SkewParams
from .unrestricted import LogDensity, unrestricted_logpdf_rows


def logpdf(
    y: ArrayLike,
    params: SkewParams,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> LogDensity:
    """
    Log-density of any supported family, with the Monte-Carlo standard error.

    Restricted families are closed form and report ``se = 0``.
    """
    if isinstance(params, CanonicalRestrictedParams):
        rows, single = as_rows(y, params.dim)
        values = restricted_logpdf_rows(rows, params)
        if single:
            return LogDensity(float(values[0]), 0.0)
        return LogDensity(values, np.zeros_like(values))
    if isinstance(params, UnrestrictedParams):
        rows, single = as_rows(y, params.dim)
        values, se = unrestricted_logpdf_rows(rows, params, draws, seed)
        if single:
            return LogDensity(float(values[0]), float(se[0]))
        return LogDensity(values, se)
    if isinstance(params, ExtendedParams):
        return sun_logpdf(y, params, draws, seed)
    raise ParameterError(f"no density for {type(params).__name__}")


def pdf(
    y: ArrayLike,
    params: SkewParams,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> float | FloatArray:
    """Density on the linear scale."""
    value = np.exp(logpdf(y, params, draws, seed).value)
    return float(value) if np.ndim(value) == 0 else np.asarray(value)
