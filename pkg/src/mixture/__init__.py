"""
Finite mixtures of skew normal and skew t distributions fitted by EM.
"""

from .em import EMOptions, FitProgressCallback, FitReport, fit_em
from .estep import (
    EStepState,
    estep,
    estep_rmsn,
    estep_rmst,
    estep_umsn_mc,
    estep_umst_mc,
)
from .initialization import init_params
from .model import (
    MixtureModel,
    mixture_logpdf,
    responsibilities,
    sample_mixture,
)
from .mstep import mstep, mstep_rmsn, mstep_rmst, mstep_unrestricted
from .parallel import ChunkedExecutor

__all__ = [
    "ChunkedExecutor",
    "EMOptions",
    "EStepState",
    "FitProgressCallback",
    "FitReport",
    "MixtureModel",
    "estep",
    "estep_rmsn",
    "estep_rmst",
    "estep_umsn_mc",
    "estep_umst_mc",
    "fit_em",
    "init_params",
    "mixture_logpdf",
    "mstep",
    "mstep_rmsn",
    "mstep_rmst",
    "mstep_unrestricted",
    "responsibilities",
    "sample_mixture",
]
