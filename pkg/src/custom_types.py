"""
Shared type definitions for skewmix.

This module contains the array aliases and the enumerations that more than one
subpackage needs, so that parameter modules can refer to tags without
importing each other.
"""

from enum import Enum

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]
BoolArray = NDArray[np.bool_]


class Family(str, Enum):
    """Mixture component family."""

    RMSN = "rmsn"
    RMST = "rmst"
    UMSN = "umsn"
    UMST = "umst"

    @property
    def is_skew_t(self) -> bool:
        return self in (Family.RMST, Family.UMST)

    @property
    def is_restricted(self) -> bool:
        return self in (Family.RMSN, Family.RMST)


class VariantTag(str, Enum):
    """
    Restricted skew parameterizations.

    A scales skewness by the marginal standard deviations, B and P use the
    canonical vector directly, G premultiplies by the scale matrix and SNI by
    its symmetric square root.
    """

    A = "A"
    B = "B"
    G = "G"
    P = "P"
    SNI = "SNI"


class Representation(str, Enum):
    """Stochastic representation used by the samplers."""

    CONDITIONING = "conditioning"
    CONVOLUTION = "convolution"


class DofUpdate(str, Enum):
    """Degrees-of-freedom update rule in the M-step."""

    OSL = "osl"
    ECME = "ecme"
    FIXED = "fixed"


class DofPolicy(str, Enum):
    """Whether components share a single degrees-of-freedom value."""

    PER_COMPONENT = "per_component"
    SHARED = "shared"
    FIXED = "fixed"


class InitStrategy(str, Enum):
    """Initialization strategy for EM."""

    KMEANS = "kmeans"
    RANDOM_STARTS = "random_starts"
