"""
Cluster assignment and the permutation-minimized misclassification rate.
"""

import itertools
import logging

import numpy as np
from numpy.typing import ArrayLike

from ..custom_types import FloatArray, IntArray
from ..exceptions import (
    EmptyInputError,
    LabelNotIntegerError,
    LengthMismatchError,
    TooManyClassesError,
)
from ..mixture.model import MixtureModel, responsibilities
from ..numerics.mvcdf import MIN_CDF_DRAWS

logger = logging.getLogger(__name__)

MAX_PERMUTATION_CLASSES = 10
PERMUTATION_CHUNK = 50_000


def assign_labels(
    data: ArrayLike,
    model: MixtureModel,
    draws: int = MIN_CDF_DRAWS,
    seed: int = 0,
) -> IntArray:
    """
    MAP cluster labels argmax_h z_hj.

    Ties go to the lowest component index.
    """
    z = responsibilities(data, model, draws, seed)
    return labels_from_responsibilities(z)


def labels_from_responsibilities(z: FloatArray) -> IntArray:
    return np.asarray(np.argmax(z, axis=1), dtype=np.int64)


def _as_labels(values: ArrayLike, name: str) -> IntArray:
    array = np.asarray(values)
    if array.ndim != 1:
        raise LabelNotIntegerError(f"{name} must be a label vector", name=name)
    if array.size and not np.issubdtype(array.dtype, np.integer):
        if not np.all(np.isfinite(array)) or np.any(array != np.round(array)):
            raise LabelNotIntegerError(f"{name} holds non-integer labels", name=name)
    labels = array.astype(np.int64)
    if np.any(labels < 0):
        raise LabelNotIntegerError(f"{name} holds negative labels", name=name)
    return labels


def confusion_matrix(pred: IntArray, truth: IntArray, k: int) -> IntArray:
    """k×k counts with rows indexed by predicted and columns by true label."""
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (pred, truth), 1)
    return counts


def misclassification_rate(
    pred: ArrayLike,
    truth: ArrayLike,
    exclude: ArrayLike | None = None,
) -> float:
    """
    Lowest error rate over all relabellings of the predicted clusters.

    Rows flagged in ``exclude`` are dropped before scoring, so they count in
    neither numerator nor denominator.

    Args:
        pred: Predicted labels
        truth: True labels
        exclude: Optional boolean mask of rows to leave out

    Returns:
        float: min over permutations σ of mean(σ(pred) ≠ truth)

    Raises:
        LengthMismatchError: If the vectors (or mask) differ in length
        TooManyClassesError: If more than 10 classes would need permuting

    Examples:
        truth = (0, 0, 1, 1), pred = (1, 1, 1, 0) gives 0.25.
    """
    pred_labels = _as_labels(pred, "pred")
    true_labels = _as_labels(truth, "truth")
    if pred_labels.shape != true_labels.shape:
        raise LengthMismatchError(
            f"label vectors differ in length: {pred_labels.size} vs {true_labels.size}",
            pred=pred_labels.size,
            truth=true_labels.size,
        )
    if exclude is not None:
        mask = np.asarray(exclude, dtype=bool)
        if mask.shape != pred_labels.shape:
            raise LengthMismatchError(
                f"exclusion mask has length {mask.size}, expected {pred_labels.size}",
                mask=mask.size,
                labels=pred_labels.size,
            )
        pred_labels = pred_labels[~mask]
        true_labels = true_labels[~mask]
    n = pred_labels.size
    if n == 0:
        raise EmptyInputError("no rows left to score")

    k = int(max(pred_labels.max(), true_labels.max())) + 1
    if k > MAX_PERMUTATION_CLASSES:
        raise TooManyClassesError(
            f"{k} classes exceed the exhaustive-search limit of "
            f"{MAX_PERMUTATION_CLASSES}",
            classes=k,
        )
    counts = confusion_matrix(pred_labels, true_labels, k)
    best = 0
    perms = itertools.permutations(range(k))
    while chunk := list(itertools.islice(perms, PERMUTATION_CHUNK)):
        block = np.array(chunk, dtype=np.intp)
        best = max(best, int(counts[np.arange(k), block].sum(axis=1).max()))
    rate = (n - best) / n
    logger.debug(f"Misclassification rate {rate:.4f} over {n} rows and {k} classes")
    return rate
