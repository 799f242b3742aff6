"""
E-steps for skew normal and skew t mixtures.

Every family is written through the convolution hierarchy

    Y | U=u, W=w ~ N(μ + Δu, Σ̃/w),   U | W=w ~ HN(0, I/w),   W ~ gamma(ν/2, ν/2)

with W ≡ 1 for the skew normal families and Δ = δ·1ᵀ of rank one in the
restricted case. The restricted expectations are closed form; the
unrestricted ones are estimated by self-normalized importance sampling from
the truncated conditional law of U given y.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from ..custom_types import DofUpdate, Family, FloatArray
from ..exceptions import (
    DimensionTooLargeError,
    EffectiveSampleSizeTooLowError,
    InvalidDrawCountError,
    ParameterError,
)
from ..numerics.densities import log_t_cdf
from ..numerics.linalg import chol, chol_solve, solve_lower
from ..numerics.mvcdf import MIN_CDF_DRAWS
from ..numerics.truncated import (
    trunc_norm_moments,
    trunc_t_moments,
    truncated_normal_ppf,
    truncated_t_ppf,
)
from ..skewdist.params import CanonicalRestrictedParams, UnrestrictedParams
from ..skewdist.restricted import restricted_logpdf_rows, skew_terms
from ..skewdist.unrestricted import skewing_uppers, unrestricted_logpdf_rows
from .model import MixtureModel, normalize_log_weights
from .parallel import ChunkedExecutor

logger = logging.getLogger(__name__)

MAX_MC_DIM = 4
MIN_EFFECTIVE_SAMPLE_SIZE = 100.0
LOG_W_STEP = 1e-3
_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True, eq=False)
class EStepState:
    """
    Conditional expectations of the latent variables for every (row, component).

    Skew normal restricted: e1 = E[U|y], e2 = E[U²|y].
    Skew t restricted: e1 = E[log W|y], e2 = E[W|y], e3 = E[WU|y], e4 = E[WU²|y].
    Unrestricted: e1 and e2 as for skew t (0 and 1 for skew normal), e3 is
    n×g×p and e4 is n×g×p×p.

    Attributes:
        family: Family of the model the state was computed from
        z: n×g responsibilities
        row_loglik: Per-row observed log-likelihood
        se: Monte-Carlo standard errors keyed by expectation name
    """

    family: Family
    z: FloatArray
    e1: FloatArray
    e2: FloatArray
    e3: FloatArray | None
    e4: FloatArray | None
    row_loglik: FloatArray
    se: dict[str, FloatArray] = field(default_factory=dict)

    @property
    def loglik(self) -> float:
        return float(np.sum(self.row_loglik))

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def mass(self) -> FloatArray:
        """Effective number of observations per component, Σ_j z_hj."""
        return np.asarray(self.z.sum(axis=0))


@dataclass
class _Chunk:
    weighted: FloatArray
    e1: FloatArray
    e2: FloatArray
    e3: FloatArray | None = None
    e4: FloatArray | None = None
    se: dict[str, FloatArray] = field(default_factory=dict)


def _run(
    data: FloatArray,
    model: MixtureModel,
    chunk_fn: Callable[[FloatArray], _Chunk],
    executor: ChunkedExecutor | None,
) -> EStepState:
    executor = executor or ChunkedExecutor()
    chunks = executor.map_rows(chunk_fn, data)
    weighted = np.concatenate([chunk.weighted for chunk in chunks])
    z, row_loglik = normalize_log_weights(weighted)

    def stack(name: str) -> FloatArray | None:
        values = [getattr(chunk, name) for chunk in chunks]
        return None if values[0] is None else np.concatenate(values)

    se = {
        key: np.concatenate([chunk.se[key] for chunk in chunks])
        for key in chunks[0].se
    }
    return EStepState(
        family=model.family,
        z=z,
        e1=np.concatenate([chunk.e1 for chunk in chunks]),
        e2=np.concatenate([chunk.e2 for chunk in chunks]),
        e3=stack("e3"),
        e4=stack("e4"),
        row_loglik=row_loglik,
        se=se,
    )


def _log_weights(model: MixtureModel) -> FloatArray:
    with np.errstate(divide="ignore"):
        return np.asarray(np.log(model.weights))


def _require(model: MixtureModel, *families: Family) -> None:
    if model.family not in families:
        allowed = ", ".join(family.value for family in families)
        raise ParameterError(f"E-step needs family {allowed}, got {model.family.value}")


def rmsn_expectations(
    rows: FloatArray, component: CanonicalRestrictedParams
) -> tuple[FloatArray, FloatArray]:
    """
    E[U|y] and E[U²|y] for one restricted skew normal component.

    U given y is N(δᵀΣ⁻¹(y−μ), 1 − δᵀΣ⁻¹δ) truncated to (0, ∞).
    """
    terms = skew_terms(rows, component.mu, component.sigma_chol, component.delta)
    moments = trunc_norm_moments(terms.arg, terms.variance)
    return np.asarray(moments.m1), np.asarray(moments.m2)


def estep_rmsn(
    data: FloatArray, model: MixtureModel, executor: ChunkedExecutor | None = None
) -> EStepState:
    """
    Closed-form E-step for a restricted skew normal mixture.

    Raises:
        InfeasibleSkewnessError: If a component has 1 − δᵀΣ⁻¹δ <= 0
        AllZeroLikelihoodError: If a row has zero likelihood everywhere
    """
    _require(model, Family.RMSN)
    log_pi = _log_weights(model)

    def chunk_fn(rows: FloatArray) -> _Chunk:
        n, g = rows.shape[0], model.g
        out = _Chunk(np.empty((n, g)), np.empty((n, g)), np.empty((n, g)))
        for h, component in enumerate(model.components):
            out.weighted[:, h] = log_pi[h] + restricted_logpdf_rows(rows, component)
            out.e1[:, h], out.e2[:, h] = rmsn_expectations(rows, component)
        return out

    return _run(data, model, chunk_fn, executor)


def _log_w_moment(
    a: FloatArray, alpha: float, beta: FloatArray, s: float
) -> FloatArray:
    """log T_{2(α+s)}(a·√((α+s)/β)), the s-dependent part of log E[W^s | y]."""
    return np.asarray(log_t_cdf(a * np.sqrt((alpha + s) / beta), 2.0 * (alpha + s)))


def rmst_expectations(
    rows: FloatArray,
    component: CanonicalRestrictedParams,
    dof_update: DofUpdate = DofUpdate.ECME,
) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """
    E[log W|y], E[W|y], E[WU|y] and E[WU²|y] for one restricted skew t component.

    With α = (ν+p)/2, β = (ν+d)/2 and a = m/√v, W given y has density
    proportional to gamma(α, β)(w)·Φ(a√w), so

        E[W^s | y] = Γ(α+s)/(Γ(α)β^s) · T_{2(α+s)}(a√((α+s)/β)) / T_{2α}(a√(α/β))

    and U given (y, W=w) is N(m, v/w) truncated to (0, ∞). E[log W|y] is the
    derivative at s = 0, with the t term differentiated numerically; the
    one-step-late form replaces it with a plug-in from E[W|y].
    """
    if component.nu is None:
        raise ParameterError("rmst expectations need a finite nu")
    nu = float(component.nu)
    p = component.dim
    terms = skew_terms(rows, component.mu, component.sigma_chol, component.delta)
    v = terms.variance
    maha = terms.maha
    alpha = 0.5 * (nu + p)
    beta = 0.5 * (nu + maha)
    a = terms.arg / math.sqrt(v)

    log_ratio = _log_w_moment(a, alpha, beta, 1.0) - _log_w_moment(a, alpha, beta, 0.0)
    e2 = (alpha / beta) * np.exp(log_ratio)
    moments = trunc_t_moments(terms.arg, v * (nu + maha) / (nu + p + 2.0), nu + p + 2.0)
    e3 = e2 * np.asarray(moments.m1)
    e4 = e2 * np.asarray(moments.m2)
    if DofUpdate(dof_update) is DofUpdate.OSL:
        e1 = e2 - np.log(beta) - alpha / beta + special.digamma(alpha)
    else:
        slope = (
            _log_w_moment(a, alpha, beta, LOG_W_STEP)
            - _log_w_moment(a, alpha, beta, -LOG_W_STEP)
        ) / (2.0 * LOG_W_STEP)
        e1 = special.digamma(alpha) - np.log(beta) + slope
    return np.asarray(e1), np.asarray(e2), np.asarray(e3), np.asarray(e4)


def estep_rmst(
    data: FloatArray,
    model: MixtureModel,
    dof_update: DofUpdate = DofUpdate.ECME,
    executor: ChunkedExecutor | None = None,
) -> EStepState:
    """
    Closed-form E-step for a restricted skew t mixture.

    Args:
        data: n×p observations
        model: rmst mixture
        dof_update: ``osl`` selects the one-step-late E[log W|y]
        executor: Row-chunk executor

    Returns:
        EStepState: z, e1..e4 as n×g matrices
    """
    _require(model, Family.RMST)
    log_pi = _log_weights(model)

    def chunk_fn(rows: FloatArray) -> _Chunk:
        n, g = rows.shape[0], model.g
        out = _Chunk(
            np.empty((n, g)),
            np.empty((n, g)),
            np.empty((n, g)),
            np.empty((n, g)),
            np.empty((n, g)),
        )
        assert out.e3 is not None and out.e4 is not None
        for h, component in enumerate(model.components):
            out.weighted[:, h] = log_pi[h] + restricted_logpdf_rows(rows, component)
            e1, e2, e3, e4 = rmst_expectations(rows, component, dof_update)
            out.e1[:, h], out.e2[:, h], out.e3[:, h], out.e4[:, h] = e1, e2, e3, e4
        return out

    return _run(data, model, chunk_fn, executor)


@dataclass(frozen=True)
class _Proposal:
    """Common random numbers and fixed matrices for one unrestricted component."""

    uniforms: FloatArray
    lambda_inv: FloatArray
    lambda_sd: FloatArray


def _proposal(
    component: UnrestrictedParams, draws: int, seed: int, h: int
) -> _Proposal:
    rng = np.random.default_rng(np.random.SeedSequence([seed, h]))
    lam = component.lambda_matrix
    identity = np.eye(component.dim)
    return _Proposal(
        uniforms=rng.random((draws, component.dim)),
        lambda_inv=chol_solve(chol(lam, "Lambda"), identity),
        lambda_sd=np.sqrt(np.diag(lam)),
    )


def _weighted_se(
    weights: FloatArray, values: FloatArray, estimate: FloatArray
) -> FloatArray:
    """Delta-method standard error of a self-normalized importance estimate."""
    spread = values - np.expand_dims(estimate, 1)
    w = weights.reshape(weights.shape + (1,) * (values.ndim - 2))
    return np.asarray(np.sqrt(np.sum(w**2 * spread**2, axis=1)))


def unrestricted_expectations(
    rows: FloatArray, component: UnrestrictedParams, proposal: _Proposal
) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray, dict[str, FloatArray]]:
    """
    Importance-sampling estimates of E[log W|y], E[W|y], E[WU|y], E[WUUᵀ|y].

    U given y is N_p(m, Λ) truncated to the positive orthant for the skew
    normal, and t_p(m, Λ(ν+d)/(ν+p), ν+p) truncated likewise for the skew t,
    where m = ΔΣ⁻¹(y−μ) and Λ = I − ΔΣ⁻¹Δ. The proposal is the product of the
    coordinatewise truncated marginals, and for the skew t

        W | (U=u, y) ~ gamma((ν+2p)/2, (ν + d + (u−m)ᵀΛ⁻¹(u−m))/2).

    Raises:
        EffectiveSampleSizeTooLowError: If any row's ESS falls below 100
    """
    p = component.dim
    draws = proposal.uniforms.shape[0]
    m = skewing_uppers(rows, component)
    scaled = solve_lower(component.sigma_chol, (rows - component.mu).T)
    maha = np.sum(scaled * scaled, axis=0)
    nu = component.nu

    if nu is None:
        sd = np.broadcast_to(proposal.lambda_sd, m.shape)[:, None, :]
        u = truncated_normal_ppf(proposal.uniforms[None], m[:, None, :], sd)
    else:
        dof = nu + p
        row_scale = np.sqrt((nu + maha) / dof)[:, None]
        sd = (proposal.lambda_sd[None, :] * row_scale)[:, None, :]
        u = truncated_t_ppf(proposal.uniforms[None], m[:, None, :], sd, dof)
    diff = u - m[:, None, :]
    quad = np.einsum("bdi,ij,bdj->bd", diff, proposal.lambda_inv, diff)
    standardized = diff / sd

    if nu is None:
        log_w = -0.5 * quad + 0.5 * np.sum(standardized**2, axis=2)
        omega = np.ones_like(quad)
        log_omega = np.zeros_like(quad)
    else:
        dof = nu + p
        rate = nu + maha[:, None] + quad
        log_w = -0.5 * (nu + 2 * p) * np.log1p(quad / (nu + maha[:, None])) + 0.5 * (
            dof + 1.0
        ) * np.sum(np.log1p(standardized**2 / dof), axis=2)
        omega = (nu + 2 * p) / rate
        log_omega = special.digamma(0.5 * (nu + 2 * p)) - np.log(0.5 * rate)

    log_w -= log_w.max(axis=1, keepdims=True)
    weights = np.exp(log_w)
    weights /= weights.sum(axis=1, keepdims=True)
    ess = 1.0 / np.sum(weights**2, axis=1)
    if np.any(ess < MIN_EFFECTIVE_SAMPLE_SIZE):
        worst = int(np.argmin(ess))
        raise EffectiveSampleSizeTooLowError(
            f"importance sampling ESS {ess[worst]:.1f} below "
            f"{MIN_EFFECTIVE_SAMPLE_SIZE:.0f} with {draws} draws",
            ess=float(ess[worst]),
            draws=draws,
        )

    e1 = np.sum(weights * log_omega, axis=1)
    e2 = np.sum(weights * omega, axis=1)
    weighted_u = (weights * omega)[..., None] * u
    e3 = weighted_u.sum(axis=1)
    e4 = np.einsum("bdi,bdj->bij", weighted_u, u)
    se = {
        "e1": _weighted_se(weights, log_omega, e1),
        "e2": _weighted_se(weights, omega, e2),
        "e3": _weighted_se(weights, omega[..., None] * u, e3),
    }
    return e1, e2, e3, e4, se


def _estep_mc(
    data: FloatArray,
    model: MixtureModel,
    draws: int,
    seed: int,
    executor: ChunkedExecutor | None,
) -> EStepState:
    p = model.dim
    if p > MAX_MC_DIM:
        raise DimensionTooLargeError(
            f"Monte-Carlo E-step supports p <= {MAX_MC_DIM}, got {p}", dim=p
        )
    if draws < MIN_CDF_DRAWS:
        raise InvalidDrawCountError(
            f"draws must be >= {MIN_CDF_DRAWS}, got {draws}", draws=draws
        )
    log_pi = _log_weights(model)
    proposals = [
        _proposal(component, draws, seed, h)
        for h, component in enumerate(model.components)
    ]
    block = max(1, _BLOCK_ELEMENTS // (draws * p))

    def chunk_fn(rows: FloatArray) -> _Chunk:
        n, g = rows.shape[0], model.g
        out = _Chunk(
            np.empty((n, g)),
            np.empty((n, g)),
            np.empty((n, g)),
            np.empty((n, g, p)),
            np.empty((n, g, p, p)),
            {"e1": np.empty((n, g)), "e2": np.empty((n, g)), "e3": np.empty((n, g, p))},
        )
        assert out.e3 is not None and out.e4 is not None
        for h, component in enumerate(model.components):
            values, _ = unrestricted_logpdf_rows(rows, component, draws, seed + h)
            out.weighted[:, h] = log_pi[h] + values
            for lo in range(0, n, block):
                hi = min(lo + block, n)
                e1, e2, e3, e4, se = unrestricted_expectations(
                    rows[lo:hi], component, proposals[h]
                )
                out.e1[lo:hi, h], out.e2[lo:hi, h] = e1, e2
                out.e3[lo:hi, h], out.e4[lo:hi, h] = e3, e4
                for key, value in se.items():
                    out.se[key][lo:hi, h] = value
        return out

    state = _run(data, model, chunk_fn, executor)
    logger.debug(
        f"MC E-step with {draws} draws: max e2 SE {float(np.max(state.se['e2'])):.3g}"
    )
    return state


def estep_umst_mc(
    data: FloatArray,
    model: MixtureModel,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
    executor: ChunkedExecutor | None = None,
) -> EStepState:
    """
    Monte-Carlo E-step for an unrestricted skew t mixture.

    Component h uses the random stream SeedSequence([seed, h]) for every row
    and the density lattice seed ``seed + h``, so results are deterministic
    per seed and identical for any chunking.

    Raises:
        DimensionTooLargeError: If p > 4
        InvalidDrawCountError: If draws < 10⁴
        EffectiveSampleSizeTooLowError: If a row's ESS < 100
    """
    _require(model, Family.UMST)
    return _estep_mc(data, model, draws, seed, executor)


def estep_umsn_mc(
    data: FloatArray,
    model: MixtureModel,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
    executor: ChunkedExecutor | None = None,
) -> EStepState:
    """Monte-Carlo E-step for an unrestricted skew normal mixture (W ≡ 1)."""
    _require(model, Family.UMSN)
    return _estep_mc(data, model, draws, seed, executor)


def estep(
    data: FloatArray,
    model: MixtureModel,
    dof_update: DofUpdate = DofUpdate.ECME,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
    executor: ChunkedExecutor | None = None,
) -> EStepState:
    """Dispatch to the E-step of the model's family."""
    if model.family is Family.RMSN:
        return estep_rmsn(data, model, executor)
    if model.family is Family.RMST:
        return estep_rmst(data, model, dof_update, executor)
    if model.family is Family.UMST:
        return estep_umst_mc(data, model, draws, seed, executor)
    return estep_umsn_mc(data, model, draws, seed, executor)
