"""
Starting values for EM from a hard partition of the data.
"""

import logging
import math

import numpy as np
from scipy import stats
from sklearn.cluster import KMeans

from ..custom_types import DofPolicy, Family, FloatArray, InitStrategy, IntArray
from ..exceptions import InfeasibleSkewnessError, InitFailedError, SkewMixError
from ..numerics.densities import logsumexp
from ..skewdist.params import CanonicalRestrictedParams, UnrestrictedParams
from .model import ComponentParams, MixtureModel, weighted_logpdf_matrix

logger = logging.getLogger(__name__)

INITIAL_NU = 30.0
MAX_RESEEDS = 10
SKEW_SHRINK = 0.9
MAX_SHRINK_STEPS = 200
MAX_INITIAL_SKEWNESS = 0.95
KMEANS_N_INIT = 10
_HALF_NORMAL_MEAN = math.sqrt(2.0 / math.pi)


def _cluster_component(
    rows: FloatArray, family: Family, skewness: bool, nu: float
) -> ComponentParams:
    """
    Moment-matched component for one cluster.

    δ starts from the clipped coordinatewise sample skewness in units of the
    marginal standard deviation; Σ and μ are then chosen so that the
    component mean and covariance equal the sample ones, and δ is shrunk by
    0.9 until the parameters are feasible.
    """
    p = rows.shape[1]
    mean = rows.mean(axis=0)
    cov = np.atleast_2d(np.cov(rows, rowvar=False, bias=True))
    sd = np.sqrt(np.diag(cov))
    if skewness:
        skew = stats.skew(rows, axis=0)
        delta = np.clip(skew, -MAX_INITIAL_SKEWNESS, MAX_INITIAL_SKEWNESS)
        delta = np.nan_to_num(delta) * sd
    else:
        delta = np.zeros(p)
    dof = nu if family.is_skew_t else None

    for _ in range(MAX_SHRINK_STEPS):
        mu = mean - _HALF_NORMAL_MEAN * delta
        try:
            if family.is_restricted:
                sigma = cov + (2.0 / math.pi) * np.outer(delta, delta)
                return CanonicalRestrictedParams(mu, sigma, delta, dof)
            sigma = cov + (2.0 / math.pi) * np.diag(delta**2)
            return UnrestrictedParams(mu, sigma, delta, dof)
        except InfeasibleSkewnessError:
            delta = SKEW_SHRINK * delta
    raise InitFailedError(
        "could not shrink the initial skewness into the feasible region"
    )


def model_from_labels(
    data: FloatArray,
    labels: IntArray,
    g: int,
    family: Family,
    dof_policy: DofPolicy = DofPolicy.PER_COMPONENT,
    skewness: bool = True,
    nu: float = INITIAL_NU,
) -> MixtureModel:
    """
    Mixture whose components are moment-matched to the clusters of a partition.

    Raises:
        InitFailedError: If a cluster holds fewer than p+1 rows
    """
    p = data.shape[1]
    counts = np.bincount(labels, minlength=g)
    if np.any(counts < p + 1):
        raise InitFailedError(
            f"a cluster holds {int(counts.min())} rows, need at least {p + 1}",
            counts=counts.tolist(),
        )
    components = tuple(
        _cluster_component(data[labels == h], family, skewness, nu) for h in range(g)
    )
    return MixtureModel(family, counts / counts.sum(), components, dof_policy)


def _kmeans_labels(
    data: FloatArray, g: int, seed: int, n_init: int, init: str
) -> IntArray:
    kmeans = KMeans(n_clusters=g, init=init, n_init=n_init, random_state=seed)
    return np.asarray(kmeans.fit_predict(data), dtype=np.int64)


def _kmeans_model(
    data: FloatArray,
    g: int,
    family: Family,
    seed: int,
    dof_policy: DofPolicy,
    skewness: bool,
) -> MixtureModel:
    last_error: SkewMixError | None = None
    for attempt in range(MAX_RESEEDS):
        labels = _kmeans_labels(data, g, seed + attempt, KMEANS_N_INIT, "k-means++")
        try:
            return model_from_labels(data, labels, g, family, dof_policy, skewness)
        except InitFailedError as e:
            logger.debug(f"k-means start {attempt} rejected: {e}")
            last_error = e
    raise InitFailedError(
        f"k-means produced an undersized cluster in {MAX_RESEEDS} attempts",
        g=g,
        reason=str(last_error),
    )


def initial_loglik(data: FloatArray, model: MixtureModel, seed: int = 0) -> float:
    """Observed log-likelihood of a starting model."""
    weighted = weighted_logpdf_matrix(data, model, seed=seed)
    return float(np.sum(logsumexp(weighted, axis=1)))


def _random_starts_model(
    data: FloatArray,
    g: int,
    family: Family,
    seed: int,
    n_starts: int,
    dof_policy: DofPolicy,
    skewness: bool,
) -> MixtureModel:
    best: tuple[float, MixtureModel] | None = None
    for start in range(n_starts):
        start_seed = int(np.random.SeedSequence([seed, start]).generate_state(1)[0])
        labels = _kmeans_labels(data, g, start_seed, 1, "random")
        try:
            model = model_from_labels(data, labels, g, family, dof_policy, skewness)
            loglik = initial_loglik(data, model, seed)
        except SkewMixError as e:
            logger.debug(f"random start {start} rejected: {e}")
            continue
        logger.debug(f"random start {start}: initial loglik {loglik:.6f}")
        if np.isfinite(loglik) and (best is None or loglik > best[0]):
            best = (loglik, model)
    if best is None:
        raise InitFailedError(f"none of {n_starts} random starts was usable", g=g)
    return best[1]


def init_params(
    data: FloatArray,
    g: int,
    family: Family,
    strategy: InitStrategy = InitStrategy.KMEANS,
    seed: int = 0,
    n_starts: int = 5,
    dof_policy: DofPolicy = DofPolicy.PER_COMPONENT,
    skewness: bool = True,
) -> MixtureModel:
    """
    Starting mixture for EM.

    Args:
        data: n×p observations
        g: Number of components
        family: Component family
        strategy: ``kmeans`` partitions with k-means++ (10 inits); reseeds up to
            10 times if a cluster is too small. ``random_starts`` runs
            ``n_starts`` single random k-means starts and keeps the one with
            the best initial log-likelihood
        seed: Random seed
        n_starts: Number of random starts
        dof_policy: Degrees-of-freedom policy of the model
        skewness: Start δ from the sample skewness; when off, δ starts at 0

    Returns:
        MixtureModel: Starting model with ν = 30 for skew t families

    Raises:
        InitFailedError: If n < g or no usable partition was found
    """
    family = Family(family)
    if g < 1 or data.shape[0] < g:
        raise InitFailedError(f"need 1 <= g <= n, got g={g}, n={data.shape[0]}", g=g)
    if InitStrategy(strategy) is InitStrategy.RANDOM_STARTS:
        model = _random_starts_model(
            data, g, family, seed, n_starts, dof_policy, skewness
        )
    else:
        model = _kmeans_model(data, g, family, seed, dof_policy, skewness)
    logger.debug(
        f"Initialized {g}-component {family.value} model with weights {model.weights}"
    )
    return model
