"""
EM driver for skew normal and skew t mixtures.

The loop alternates E- and M-steps until the relative log-likelihood change
|ℓ_{k+1} − ℓ_k| / (|ℓ_k| + 1) drops below ``tol`` or ``max_iter`` iterations
have run.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np
from numpy.typing import ArrayLike

from ..custom_types import (
    DofPolicy,
    DofUpdate,
    Family,
    FloatArray,
    InitStrategy,
    IntArray,
)
from ..exceptions import DimensionMismatchError, InitFailedError, ParameterError
from ..numerics.mvcdf import MIN_CDF_DRAWS
from .estep import EStepState, estep
from .initialization import INITIAL_NU, init_params
from .model import MixtureModel
from .mstep import mstep
from .parallel import DEFAULT_CHUNK_SIZE, ChunkedExecutor

logger = logging.getLogger(__name__)

ASCENT_SLACK = 1e-8


class FitProgressCallback(Protocol):
    """
    Protocol for per-iteration progress callbacks.

    Implementations receive one call after every EM iteration.
    """

    def __call__(
        self,
        iteration: int,
        loglik: float,
        change: float,
        metadata: dict[str, Any] | None = None,
    ) -> None:
        """
        Called after an EM iteration.

        Args:
            iteration: Iteration number, starting at 1
            loglik: Observed log-likelihood after the iteration
            change: Relative log-likelihood change of the iteration
            metadata: Optional extra values such as the current ν
        """
        ...


@dataclass(frozen=True)
class EMOptions:
    """
    Options for fit_em.

    Attributes:
        max_iter: Maximum number of EM iterations
        tol: Relative log-likelihood tolerance; ``inf`` stops after initialization
        init: Initialization strategy
        n_starts: Starts tried by the random_starts strategy
        dof_update: ν update rule for the skew t families
        dof_policy: Per-component, shared or fixed ν
        seed: Seed for initialization and Monte-Carlo quantities
        mc_draws: Draws per row in Monte-Carlo E-steps and densities
        fit_skewness: Estimate δ; when off, δ starts at 0 and stays there
        initial_nu: Starting ν for the skew t families
        max_workers: E-step worker threads (``None`` picks from the CPU count)
        chunk_size: Rows per E-step chunk
    """

    max_iter: int = 500
    tol: float = 1e-8
    init: InitStrategy = InitStrategy.KMEANS
    n_starts: int = 5
    dof_update: DofUpdate = DofUpdate.ECME
    dof_policy: DofPolicy = DofPolicy.PER_COMPONENT
    seed: int = 0
    mc_draws: int = MIN_CDF_DRAWS
    fit_skewness: bool = True
    initial_nu: float = INITIAL_NU
    max_workers: int | None = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def __post_init__(self) -> None:
        if self.max_iter < 0:
            raise ParameterError(f"max_iter must be >= 0, got {self.max_iter}")
        if not self.tol > 0.0:
            raise ParameterError(f"tol must be > 0, got {self.tol}")
        if self.n_starts < 1:
            raise ParameterError(f"n_starts must be >= 1, got {self.n_starts}")
        if self.mc_draws < MIN_CDF_DRAWS:
            raise ParameterError(
                f"mc_draws must be >= {MIN_CDF_DRAWS}, got {self.mc_draws}"
            )
        object.__setattr__(self, "init", InitStrategy(self.init))
        object.__setattr__(self, "dof_update", DofUpdate(self.dof_update))
        object.__setattr__(self, "dof_policy", DofPolicy(self.dof_policy))


@dataclass
class FitReport:
    """
    Result of an EM fit.

    Attributes:
        model: Fitted mixture
        loglik_trace: Log-likelihood at initialization and after every iteration
        iterations: Number of EM iterations run
        converged: Whether the tolerance was reached before max_iter
        responsibilities: n×g posterior probabilities under ``model``
        seed: Seed used
        elapsed: Wall time in seconds
        warnings: Notable events during the fit
    """

    model: MixtureModel
    loglik_trace: list[float]
    iterations: int
    converged: bool
    responsibilities: FloatArray
    seed: int
    elapsed: float = 0.0
    warnings: list[str] = field(default_factory=list)

    @property
    def loglik(self) -> float:
        return self.loglik_trace[-1]

    @property
    def labels(self) -> IntArray:
        """MAP labels; ties go to the lowest component index."""
        return np.asarray(np.argmax(self.responsibilities, axis=1), dtype=np.int64)


def relative_change(previous: float, current: float) -> float:
    return abs(current - previous) / (abs(previous) + 1.0)


def _check_data(data: ArrayLike, g: int) -> FloatArray:
    rows = np.asarray(data, dtype=float)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise DimensionMismatchError("data must be a non-empty n×p matrix")
    if not np.all(np.isfinite(rows)):
        raise ParameterError("data contains non-finite values")
    n, p = rows.shape
    if g < 1 or n <= g * (p + 1):
        raise InitFailedError(
            f"need n > g·(p+1) observations, got n={n}, g={g}, p={p}", n=n, g=g, p=p
        )
    return rows


def _ascent_guaranteed(family: Family, options: EMOptions) -> bool:
    if family is Family.RMSN:
        return True
    return family is Family.RMST and options.dof_update is not DofUpdate.OSL


def _starting_model(
    rows: FloatArray,
    g: int,
    family: Family,
    options: EMOptions,
    initial_model: MixtureModel | None,
) -> MixtureModel:
    if initial_model is not None:
        if initial_model.family is not family or initial_model.g != g:
            raise ParameterError(
                "initial model does not match the requested family and g"
            )
        if initial_model.dim != rows.shape[1]:
            raise DimensionMismatchError(
                "initial model dimension does not match the data"
            )
        return initial_model
    model = init_params(
        rows,
        g,
        family,
        options.init,
        options.seed,
        options.n_starts,
        options.dof_policy,
        options.fit_skewness,
    )
    if family.is_skew_t and options.initial_nu != model.components[0].nu:
        components = tuple(c.with_nu(options.initial_nu) for c in model.components)
        model = MixtureModel(family, model.weights, components, model.dof_policy)
    return model


def fit_em(
    data: ArrayLike,
    g: int,
    family: Family,
    options: EMOptions | None = None,
    callback: FitProgressCallback | None = None,
    initial_model: MixtureModel | None = None,
) -> FitReport:
    """
    Fit a g-component mixture by EM.

    Args:
        data: n×p observations
        g: Number of components
        family: Component family
        options: Fit options, defaults when omitted
        callback: Called after every iteration
        initial_model: Starting model; skips initialization when given

    Returns:
        FitReport: Fitted model, trace and responsibilities. Reruns with the
        same inputs are bit-identical for any ``max_workers``.

    Raises:
        InitFailedError: If n <= g·(p+1) or initialization fails
        DegenerateComponentError: If a component collapses
    """
    options = options or EMOptions()
    family = Family(family)
    rows = _check_data(data, g)
    start_time = time.perf_counter()
    warnings: list[str] = []
    executor = ChunkedExecutor(options.max_workers, options.chunk_size)

    if family is Family.UMST and options.dof_update is DofUpdate.ECME:
        message = (
            "ECME is not available with Monte-Carlo E-steps; using the EM nu equation"
        )
        logger.warning(message)
        warnings.append(message)

    model = _starting_model(rows, g, family, options, initial_model)
    logger.info(
        f"Fitting {g}-component {family.value} mixture to "
        f"{rows.shape[0]}×{rows.shape[1]} data (seed {options.seed})"
    )

    def run_estep(current: MixtureModel) -> EStepState:
        return estep(
            rows, current, options.dof_update, options.mc_draws, options.seed, executor
        )

    state = run_estep(model)
    trace = [state.loglik]
    converged = math.isinf(options.tol)
    check_ascent = _ascent_guaranteed(family, options)

    for iteration in range(1, options.max_iter + 1):
        if converged:
            break
        model = mstep(rows, state, model, options.dof_update, options.fit_skewness)
        state = run_estep(model)
        previous, current = trace[-1], state.loglik
        trace.append(current)
        change = relative_change(previous, current)
        if check_ascent and current < previous - ASCENT_SLACK:
            message = (
                f"log-likelihood decreased by {previous - current:.3g} "
                f"at iteration {iteration}"
            )
            logger.warning(message)
            warnings.append(message)
        logger.debug(
            f"Iteration {iteration}: loglik {current:.10f}, change {change:.3g}"
        )
        if callback:
            callback(iteration, current, change, {"nu": model.nus})
        converged = change < options.tol

    elapsed = time.perf_counter() - start_time
    iterations = len(trace) - 1
    if converged:
        logger.info(f"Converged after {iterations} iterations, loglik {trace[-1]:.6f}")
    else:
        logger.warning(
            f"No convergence after {iterations} iterations, loglik {trace[-1]:.6f}"
        )
    return FitReport(
        model=model,
        loglik_trace=trace,
        iterations=iterations,
        converged=converged,
        responsibilities=state.z,
        seed=options.seed,
        elapsed=elapsed,
        warnings=warnings,
    )
