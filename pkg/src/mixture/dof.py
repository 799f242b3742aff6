"""
Degrees-of-freedom updates for the skew t families.
"""

import logging
import math
from collections.abc import Callable

import numpy as np
from scipy import optimize, special

from ..exceptions import DofSolveFailedError

logger = logging.getLogger(__name__)

DOF_LOWER = 0.5
DOF_UPPER = 1000.0
LOG_DOF_XATOL = 1e-4


def dof_score(nu: float, mean_gap: float) -> float:
    """
    Left side of the EM equation for ν.

        log(ν/2) − ψ(ν/2) + 1 + mean_gap = 0

    where mean_gap is the responsibility-weighted mean of E[log W|y] − E[W|y].
    The score decreases in ν towards 1 + mean_gap <= 0.
    """
    half = 0.5 * nu
    return float(math.log(half) - special.digamma(half) + 1.0 + mean_gap)


def solve_dof_equation(
    mean_gap: float, lower: float = DOF_LOWER, upper: float = DOF_UPPER
) -> float:
    """
    Root of the EM equation for ν in [lower, upper] by Brent's method.

    A root beyond ``upper`` means the data look normal; ``upper`` is returned
    and a warning logged.

    Raises:
        DofSolveFailedError: If the score is not finite or has no root above
            ``lower``
    """
    if not math.isfinite(mean_gap):
        raise DofSolveFailedError(
            "non-finite statistic in the nu equation", gap=mean_gap
        )
    at_lower = dof_score(lower, mean_gap)
    at_upper = dof_score(upper, mean_gap)
    if at_lower < 0.0:
        raise DofSolveFailedError(
            f"nu equation has no root in [{lower}, {upper}]",
            score_lower=at_lower,
            score_upper=at_upper,
        )
    if at_upper > 0.0:
        logger.warning(f"nu update hit the upper bound {upper}")
        return upper
    return float(optimize.brentq(dof_score, lower, upper, args=(mean_gap,)))


def maximize_dof(
    objective: Callable[[float], float],
    current: float,
    lower: float = DOF_LOWER,
    upper: float = DOF_UPPER,
) -> float:
    """
    Maximize ``objective(ν)`` over [lower, upper] by bounded search on log ν.

    The current value is kept unless the search finds a strictly better one,
    so the objective never decreases.

    Raises:
        DofSolveFailedError: If the objective is not finite at the current value
            nor at the search result
    """
    result = optimize.minimize_scalar(
        lambda log_nu: -objective(math.exp(log_nu)),
        bounds=(math.log(lower), math.log(upper)),
        method="bounded",
        options={"xatol": LOG_DOF_XATOL},
    )
    candidate = float(math.exp(result.x))
    best = objective(candidate)
    incumbent = objective(current) if lower <= current <= upper else -np.inf
    if not (math.isfinite(best) or math.isfinite(incumbent)):
        raise DofSolveFailedError(
            "log-likelihood is not finite along the nu search", nu=candidate
        )
    if not best > incumbent:
        return current
    if abs(result.x - math.log(upper)) < 10 * LOG_DOF_XATOL:
        logger.warning(f"nu search stopped at the upper bound {upper}")
    elif abs(result.x - math.log(lower)) < 10 * LOG_DOF_XATOL:
        logger.warning(f"nu search stopped at the lower bound {lower}")
    return candidate
