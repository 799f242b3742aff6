"""
Probability and linear-algebra kernel.

SPD factorization, elliptical log-densities, univariate and low-dimensional
multivariate distribution functions, and truncated-distribution moments.
"""

from .densities import (
    check_dof,
    log_norm_cdf,
    log_t_cdf,
    logsumexp,
    mvn_logpdf,
    mvt_logpdf,
    norm_cdf,
    t_cdf,
)
from .linalg import as_spd, chol, logdet_from_chol, mahalanobis_sq, symmetric_power
from .mvcdf import (
    MAX_CDF_DIM,
    MIN_CDF_DRAWS,
    CdfBatch,
    CdfEstimate,
    mvn_cdf,
    mvn_cdf_many,
    mvt_cdf,
    mvt_cdf_many,
)
from .truncated import (
    TruncMoments,
    sample_truncated_normal,
    sample_truncated_t,
    trunc_norm_moments,
    trunc_t_mean,
    trunc_t_moments,
    truncated_normal_ppf,
    truncated_t_ppf,
)

__all__ = [
    "MAX_CDF_DIM",
    "MIN_CDF_DRAWS",
    "CdfBatch",
    "CdfEstimate",
    "TruncMoments",
    "as_spd",
    "check_dof",
    "chol",
    "log_norm_cdf",
    "log_t_cdf",
    "logdet_from_chol",
    "logsumexp",
    "mahalanobis_sq",
    "mvn_cdf",
    "mvn_cdf_many",
    "mvn_logpdf",
    "mvt_cdf",
    "mvt_cdf_many",
    "mvt_logpdf",
    "norm_cdf",
    "sample_truncated_normal",
    "sample_truncated_t",
    "symmetric_power",
    "t_cdf",
    "trunc_norm_moments",
    "trunc_t_mean",
    "trunc_t_moments",
    "truncated_normal_ppf",
    "truncated_t_ppf",
]
