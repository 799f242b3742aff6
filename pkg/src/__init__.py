"""
skewmix: skew normal and skew t distributions and their mixtures.

Densities and samplers for the restricted, unrestricted and unified skew
families, conversions between their parameterizations, EM fitting of finite
mixtures, and a clustering command-line front end.
"""

__version__ = "0.1.0"

from .custom_types import DofPolicy, DofUpdate, Family, InitStrategy, VariantTag
from .exceptions import SkewMixError
from .mixture import EMOptions, FitReport, MixtureModel, fit_em

__all__ = [
    "DofPolicy",
    "DofUpdate",
    "EMOptions",
    "Family",
    "FitReport",
    "InitStrategy",
    "MixtureModel",
    "SkewMixError",
    "VariantTag",
    "fit_em",
]
