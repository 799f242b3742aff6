"""
Conversions among restricted skew parameterizations and between the
conditioning and convolution forms.
"""

from .convolution import (
    ConvolutionParams,
    conditioning_to_convolution,
    convolution_to_conditioning,
    convolution_to_unrestricted,
    unrestricted_to_convolution,
)
from .variants import (
    VariantParams,
    from_canonical,
    sample_variant,
    spd_sqrt,
    to_canonical,
)

__all__ = [
    "ConvolutionParams",
    "VariantParams",
    "conditioning_to_convolution",
    "convolution_to_conditioning",
    "convolution_to_unrestricted",
    "from_canonical",
    "sample_variant",
    "spd_sqrt",
    "to_canonical",
    "unrestricted_to_convolution",
]
