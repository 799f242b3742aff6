"""
Skew normal and skew t distributions.

Log-densities for the restricted, unrestricted, extended, unified and
canonical fundamental families, the restricted parameterization variants,
and samplers for both stochastic representations.
"""

from .extended import cfusn_logpdf, esn_logpdf, sun_logpdf
from .generic import logpdf, pdf
from .params import (
    CanonicalRestrictedParams,
    ExtendedParams,
    SampleBatch,
    UnrestrictedParams,
)
from .restricted import rmsn_logpdf, rmst_logpdf, variant_logpdf
from .sampling import SkewParams, draw, sample, sample_sharded
from .unrestricted import LogDensity, umsn_logpdf, umst_logpdf

__all__ = [
    "CanonicalRestrictedParams",
    "ExtendedParams",
    "LogDensity",
    "SampleBatch",
    "SkewParams",
    "UnrestrictedParams",
    "cfusn_logpdf",
    "draw",
    "esn_logpdf",
    "logpdf",
    "pdf",
    "rmsn_logpdf",
    "rmst_logpdf",
    "sample",
    "sample_sharded",
    "sun_logpdf",
    "umsn_logpdf",
    "umst_logpdf",
    "variant_logpdf",
]
