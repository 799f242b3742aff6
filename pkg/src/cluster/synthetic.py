"""
Synthetic stand-in for a three-population flow cytometry sample.

Three restricted skew t populations over the markers CD3, CD5 and CD19 with
tail weights ν = 4, 7 and 15. Locations are at least 7 Mahalanobis units
apart. A small random subset of rows is flagged as dead cells; those rows are
fitted but left out of scoring.
"""

import logging

import numpy as np

from ..custom_types import Family
from ..exceptions import ParameterError
from ..mixture.model import MixtureModel, sample_mixture
from ..skewdist.params import CanonicalRestrictedParams
from .dataset import Dataset

logger = logging.getLogger(__name__)

MARKERS = ["CD3", "CD5", "CD19"]
SYNTHETIC_NUS = (4.0, 7.0, 15.0)
SYNTHETIC_WEIGHTS = (0.35, 0.25, 0.40)
DEAD_CELL_FRACTION = 0.03

_SCALE = [[1.2, 0.3, 0.1], [0.3, 1.0, 0.2], [0.1, 0.2, 1.1]]


def synthetic_model() -> MixtureModel:
    """The generating FM-rMST model."""
    b_cells = CanonicalRestrictedParams(
        [1.0, 1.0, 9.0], _SCALE, [0.0, 0.0, 0.8], SYNTHETIC_NUS[0]
    )
    t_cells = CanonicalRestrictedParams(
        [9.0, 8.0, 1.0], _SCALE, [0.6, 0.5, 0.0], SYNTHETIC_NUS[1]
    )
    other = CanonicalRestrictedParams(
        [1.0, 1.0, 1.0], _SCALE, [-0.5, -0.4, -0.4], SYNTHETIC_NUS[2]
    )
    return MixtureModel(Family.RMST, list(SYNTHETIC_WEIGHTS), (b_cells, t_cells, other))


def make_synthetic_dlbcl_like(
    n: int = 3000, seed: int = 0, dead_fraction: float = DEAD_CELL_FRACTION
) -> Dataset:
    """
    Draw a labelled synthetic sample.

    Args:
        n: Number of rows
        seed: Seed for the mixture draw and the dead-cell flags
        dead_fraction: Expected fraction of rows flagged as excluded

    Returns:
        Dataset: CD3/CD5/CD19 features, labels 0..2 and the exclusion mask
    """
    if not 0.0 <= dead_fraction < 1.0:
        raise ParameterError(
            f"dead_fraction must be in [0, 1), got {dead_fraction}",
            dead_fraction=dead_fraction,
        )
    rows, labels = sample_mixture(synthetic_model(), n, seed=seed)
    flags = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    excluded = flags.random(n) < dead_fraction
    logger.info(
        f"Generated {n} synthetic rows (seed {seed}), "
        f"{int(excluded.sum())} flagged dead"
    )
    return Dataset(rows, list(MARKERS), labels, excluded)
