"""
M-steps for skew normal and skew t mixtures.

The restricted updates solve the stationarity equations of the Q-function in
(μ, δ) jointly, then Σ̃ in closed form and Σ = Σ̃ + δδᵀ, which keeps every
update feasible whenever Σ̃ is positive definite. The unrestricted update is
a conditional maximization sequence: μ, then the diagonal skewness, then Σ̃.
"""

import logging
from dataclasses import replace

import numpy as np
from scipy import linalg

from ..custom_types import DofPolicy, DofUpdate, Family, FloatArray
from ..exceptions import DegenerateComponentError, ParameterError
from ..numerics.densities import logsumexp
from ..numerics.linalg import chol_solve
from ..skewdist.params import CanonicalRestrictedParams, UnrestrictedParams
from ..skewdist.restricted import restricted_logpdf_rows
from .dof import maximize_dof, solve_dof_equation
from .estep import EStepState
from .model import MixtureModel

logger = logging.getLogger(__name__)

JITTER_SCALE = 1e-10


def check_mass(state: EStepState, p: int) -> FloatArray:
    """
    Per-component responsibility mass.

    Raises:
        DegenerateComponentError: If some component holds fewer than p+1
            effective observations
    """
    mass = state.mass
    low = np.flatnonzero(mass < p + 1)
    if low.size:
        h = int(low[0])
        raise DegenerateComponentError(
            f"component {h} has effective mass {mass[h]:.3f} < {p + 1}",
            component=h,
            mass=float(mass[h]),
        )
    return mass


def stabilized_covariance(matrix: FloatArray, component: int) -> FloatArray:
    """
    Symmetrize a covariance update, adding diagonal jitter if Cholesky fails.

    Raises:
        DegenerateComponentError: If the matrix is still not positive definite
            after jitter
    """
    sym = 0.5 * (matrix + matrix.T)
    try:
        linalg.cholesky(sym, lower=True)
        return sym
    except (linalg.LinAlgError, ValueError):
        pass
    p = sym.shape[0]
    jitter = JITTER_SCALE * max(float(np.trace(sym)), 0.0) / p
    logger.warning(
        f"Component {component}: covariance not SPD, adding jitter {jitter:.3g}"
    )
    jittered = sym + jitter * np.eye(p)
    try:
        linalg.cholesky(jittered, lower=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise DegenerateComponentError(
            f"component {component} covariance lost positive definiteness",
            component=component,
        ) from e
    return jittered


def _restricted_update(
    rows: FloatArray,
    z: FloatArray,
    a2: FloatArray,
    a3: FloatArray,
    a4: FloatArray,
    old: CanonicalRestrictedParams,
    fit_skewness: bool,
    h: int,
) -> CanonicalRestrictedParams:
    """
    Closed-form (μ, δ, Σ) for one component from weighted latent moments.

    a2, a3 and a4 are z·E[W], z·E[WU] and z·E[WU²] (z, z·E[U], z·E[U²] for
    the skew normal).
    """
    n_h = float(np.sum(z))
    A2, A3, A4 = float(np.sum(a2)), float(np.sum(a3)), float(np.sum(a4))
    sy2 = np.sum(a2[:, None] * rows, axis=0)
    sy3 = np.sum(a3[:, None] * rows, axis=0)
    if fit_skewness:
        det = A2 * A4 - A3 * A3
        if not det > 0.0:
            raise DegenerateComponentError(
                f"component {h} latent moments are singular", component=h, det=det
            )
        mu = (A4 * sy2 - A3 * sy3) / det
        delta = (A2 * sy3 - A3 * sy2) / det
    else:
        delta = old.delta
        mu = (sy2 - A3 * delta) / A2
    resid = rows - mu
    cross = np.sum(a3[:, None] * resid, axis=0)
    scatter = resid.T @ (a2[:, None] * resid)
    sigma_tilde = (
        scatter
        - np.outer(delta, cross)
        - np.outer(cross, delta)
        + A4 * np.outer(delta, delta)
    ) / n_h
    sigma_tilde = stabilized_covariance(sigma_tilde, h)
    sigma = sigma_tilde + np.outer(delta, delta)
    return CanonicalRestrictedParams(mu, sigma, delta, old.nu)


def _require(model: MixtureModel, state: EStepState, *families: Family) -> None:
    if model.family not in families or state.family is not model.family:
        raise ParameterError(
            f"M-step for {model.family.value} got an E-step state "
            f"for {state.family.value}"
        )


def mstep_rmsn(
    data: FloatArray,
    state: EStepState,
    model: MixtureModel,
    fit_skewness: bool = True,
) -> MixtureModel:
    """
    Closed-form M-step for a restricted skew normal mixture.

    Args:
        data: n×p observations
        state: E-step state computed at ``model``
        model: Current model, which supplies δ when ``fit_skewness`` is off
        fit_skewness: Update δ; when off, δ stays at its current value

    Raises:
        DegenerateComponentError: If a component's mass < p+1 or its
            covariance cannot be made positive definite
    """
    _require(model, state, Family.RMSN)
    mass = check_mass(state, model.dim)
    components = []
    for h, old in enumerate(model.components):
        assert isinstance(old, CanonicalRestrictedParams)
        z = state.z[:, h]
        components.append(
            _restricted_update(
                data, z, z, z * state.e1[:, h], z * state.e2[:, h], old, fit_skewness, h
            )
        )
    return MixtureModel(
        model.family, mass / state.n, tuple(components), model.dof_policy
    )


def _dof_frozen(model: MixtureModel, dof_update: DofUpdate) -> bool:
    if DofUpdate(dof_update) is DofUpdate.FIXED:
        return True
    return model.dof_policy is DofPolicy.FIXED


def _gaps(state: EStepState) -> FloatArray:
    return np.asarray(np.sum(state.z * (state.e1 - state.e2), axis=0))


def _equation_nus(
    model: MixtureModel, state: EStepState, mass: FloatArray
) -> list[float]:
    gaps = _gaps(state)
    if model.dof_policy is DofPolicy.SHARED:
        nu = solve_dof_equation(float(np.sum(gaps) / np.sum(mass)))
        return [nu] * model.g
    return [solve_dof_equation(float(gaps[h] / mass[h])) for h in range(model.g)]


def _ecme_nus(data: FloatArray, model: MixtureModel) -> list[float]:
    """Maximize the observed log-likelihood over ν with the other parameters fixed."""
    with np.errstate(divide="ignore"):
        log_pi = np.log(model.weights)
    components = [
        c for c in model.components if isinstance(c, CanonicalRestrictedParams)
    ]
    columns = np.column_stack(
        [log_pi[h] + restricted_logpdf_rows(data, c) for h, c in enumerate(components)]
    )

    if model.dof_policy is DofPolicy.SHARED:

        def shared(nu: float) -> float:
            trial = np.column_stack(
                [
                    log_pi[h] + restricted_logpdf_rows(data, c.with_nu(nu))
                    for h, c in enumerate(components)
                ]
            )
            return float(np.sum(logsumexp(trial, axis=1)))

        current = components[0].nu
        assert current is not None
        return [maximize_dof(shared, current)] * model.g

    nus = []
    for h, component in enumerate(components):

        def single(
            nu: float, h: int = h, component: CanonicalRestrictedParams = component
        ) -> float:
            density = restricted_logpdf_rows(data, component.with_nu(nu))
            columns[:, h] = log_pi[h] + density
            return float(np.sum(logsumexp(columns, axis=1)))

        assert component.nu is not None
        nu = maximize_dof(single, component.nu)
        components[h] = component.with_nu(nu)
        columns[:, h] = log_pi[h] + restricted_logpdf_rows(data, components[h])
        nus.append(nu)
    return nus


def _with_nus(model: MixtureModel, nus: list[float]) -> MixtureModel:
    pairs = zip(model.components, nus, strict=True)
    components = tuple(c.with_nu(nu) for c, nu in pairs)
    return replace(model, components=components)


def mstep_rmst(
    data: FloatArray,
    state: EStepState,
    model: MixtureModel,
    dof_update: DofUpdate = DofUpdate.ECME,
    fit_skewness: bool = True,
) -> MixtureModel:
    """
    M-step for a restricted skew t mixture.

    π, μ, δ and Σ follow the skew normal update with W-weights. ν is then
    updated per ``dof_update``: ``osl`` solves the EM equation with the
    one-step-late E[log W|y] already in ``state``, ``ecme`` maximizes the
    observed log-likelihood over ν (per component, or jointly under the
    shared policy) and ``fixed`` leaves it unchanged.

    Raises:
        DegenerateComponentError: If a component's mass < p+1
        DofSolveFailedError: If the ν search brackets no root or maximum
    """
    _require(model, state, Family.RMST)
    assert state.e3 is not None and state.e4 is not None
    mass = check_mass(state, model.dim)
    components = []
    for h, old in enumerate(model.components):
        assert isinstance(old, CanonicalRestrictedParams)
        z = state.z[:, h]
        components.append(
            _restricted_update(
                data,
                z,
                z * state.e2[:, h],
                z * state.e3[:, h],
                z * state.e4[:, h],
                old,
                fit_skewness,
                h,
            )
        )
    updated = MixtureModel(
        model.family, mass / state.n, tuple(components), model.dof_policy
    )
    if _dof_frozen(model, dof_update):
        return updated
    if DofUpdate(dof_update) is DofUpdate.OSL:
        return _with_nus(updated, _equation_nus(updated, state, mass))
    return _with_nus(updated, _ecme_nus(data, updated))


def _unrestricted_update(
    rows: FloatArray,
    z: FloatArray,
    w: FloatArray,
    e3: FloatArray,
    e4: FloatArray,
    old: UnrestrictedParams,
    fit_skewness: bool,
    h: int,
) -> UnrestrictedParams:
    n_h = float(np.sum(z))
    zw = z * w
    z_e3 = z[:, None] * e3
    s3 = np.sum(z_e3, axis=0)
    s4 = np.sum(z[:, None, None] * e4, axis=0)

    delta = old.delta
    mu = (np.sum(zw[:, None] * rows, axis=0) - delta * s3) / float(np.sum(zw))
    resid = rows - mu
    if fit_skewness:
        precision = chol_solve(
            linalg.cholesky(old.sigma_tilde, lower=True), np.eye(old.dim)
        )
        lhs = precision * s4
        rhs = np.sum((resid @ precision) * z_e3, axis=0)
        delta = linalg.solve(0.5 * (lhs + lhs.T), rhs, assume_a="sym")

    cross = resid.T @ z_e3
    spread = delta[:, None] * cross.T
    sigma_tilde = (
        resid.T @ (zw[:, None] * resid)
        - spread
        - spread.T
        + np.outer(delta, delta) * s4
    ) / n_h
    sigma_tilde = stabilized_covariance(sigma_tilde, h)
    return UnrestrictedParams(mu, sigma_tilde + np.diag(delta**2), delta, old.nu)


def mstep_unrestricted(
    data: FloatArray,
    state: EStepState,
    model: MixtureModel,
    dof_update: DofUpdate = DofUpdate.ECME,
    fit_skewness: bool = True,
) -> MixtureModel:
    """
    Conditional-maximization step for unrestricted mixtures.

    ν is updated from the EM equation with the Monte-Carlo E[log W|y] for
    both ``osl`` and ``ecme``.

    Raises:
        DegenerateComponentError: If a component's mass < p+1
    """
    _require(model, state, Family.UMSN, Family.UMST)
    assert state.e3 is not None and state.e4 is not None
    mass = check_mass(state, model.dim)
    components = []
    for h, old in enumerate(model.components):
        assert isinstance(old, UnrestrictedParams)
        components.append(
            _unrestricted_update(
                data,
                state.z[:, h],
                state.e2[:, h],
                state.e3[:, h],
                state.e4[:, h],
                old,
                fit_skewness,
                h,
            )
        )
    updated = MixtureModel(
        model.family, mass / state.n, tuple(components), model.dof_policy
    )
    if model.family is Family.UMSN or _dof_frozen(model, dof_update):
        return updated
    return _with_nus(updated, _equation_nus(updated, state, mass))


def mstep(
    data: FloatArray,
    state: EStepState,
    model: MixtureModel,
    dof_update: DofUpdate = DofUpdate.ECME,
    fit_skewness: bool = True,
) -> MixtureModel:
    """Dispatch to the M-step of the model's family."""
    if model.family is Family.RMSN:
        return mstep_rmsn(data, state, model, fit_skewness)
    if model.family is Family.RMST:
        return mstep_rmst(data, state, model, dof_update, fit_skewness)
    return mstep_unrestricted(data, state, model, dof_update, fit_skewness)
