"""
CSV ingestion for clustering runs.

Files are UTF-8 with a header row, comma separators and decimal points. Every
cell is read as text first so that a bad cell can be reported by row and
column instead of surfacing as a pandas dtype error.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..custom_types import BoolArray, FloatArray, IntArray
from ..exceptions import LabelNotIntegerError, MissingValueError, ParseError

logger = logging.getLogger(__name__)

MISSING_TOKENS = frozenset({"", "nan", "na", "n/a", "null", "none"})
TRUE_TOKENS = frozenset({"1", "true", "yes"})
FALSE_TOKENS = frozenset({"0", "false", "no"})


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Feature matrix plus optional ground-truth labels and exclusion mask.

    Attributes:
        rows: n×p feature matrix
        column_names: Names of the p feature columns
        true_labels: Labels 0..g'−1, when the file has a label column
        excluded_mask: Rows to leave out of scoring (still used for fitting)
    """

    rows: FloatArray
    column_names: list[str]
    true_labels: IntArray | None = None
    excluded_mask: BoolArray | None = None

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    @property
    def p(self) -> int:
        return int(self.rows.shape[1])

    @property
    def n_classes(self) -> int | None:
        if self.true_labels is None:
            return None
        return int(self.true_labels.max()) + 1

    def to_frame(
        self, label_column: str = "label", exclude_column: str = "excluded"
    ) -> pd.DataFrame:
        """Tabular form, with label and exclusion columns when present."""
        frame = pd.DataFrame(self.rows, columns=self.column_names)
        if self.true_labels is not None:
            frame[label_column] = self.true_labels
        if self.excluded_mask is not None:
            frame[exclude_column] = self.excluded_mask.astype(np.int64)
        return frame


def _read_text(path: Path) -> pd.DataFrame:
    if not path.is_file():
        raise ParseError(f"data file not found: {path}", path=str(path))
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, skipinitialspace=True
        )
    except pd.errors.EmptyDataError as e:
        raise ParseError(f"data file is empty: {path}", path=str(path)) from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise ParseError(f"could not read {path}: {e}", path=str(path)) from e
    if frame.empty:
        raise ParseError(f"data file has no rows: {path}", path=str(path))
    return frame


def _numeric_column(frame: pd.DataFrame, name: str) -> FloatArray:
    """Parse one column as finite reals, reporting the first bad cell."""
    text = frame[name].str.strip()
    values = pd.to_numeric(text, errors="coerce").to_numpy(dtype=float)
    missing = text.str.lower().isin(MISSING_TOKENS).to_numpy()
    if missing.any():
        row = int(np.argmax(missing)) + 1
        raise MissingValueError(
            f"missing value at row {row}, column '{name}'", row=row, col=name
        )
    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.argmax(bad)) + 1
        raise ParseError(
            f"cannot parse '{text.iloc[row - 1]}' at row {row}, column '{name}'",
            row=row,
            col=name,
        )
    return values


def _labels(frame: pd.DataFrame, name: str) -> IntArray:
    values = _numeric_column(frame, name)
    if np.any(values != np.round(values)) or np.any(values < 0):
        raise LabelNotIntegerError(
            f"label column '{name}' must hold non-negative integers", col=name
        )
    labels = values.astype(np.int64)
    present = np.unique(labels)
    if not np.array_equal(present, np.arange(present.size)):
        raise LabelNotIntegerError(
            f"labels in '{name}' must be contiguous 0..g-1, got {present.tolist()}",
            col=name,
        )
    return labels


def _mask(frame: pd.DataFrame, name: str) -> BoolArray:
    text = frame[name].str.strip().str.lower()
    for index, token in enumerate(text):
        if token in MISSING_TOKENS:
            raise MissingValueError(
                f"missing value at row {index + 1}, column '{name}'",
                row=index + 1,
                col=name,
            )
        if token not in TRUE_TOKENS and token not in FALSE_TOKENS:
            raise ParseError(
                f"cannot parse '{token}' as a flag at row {index + 1}, column '{name}'",
                row=index + 1,
                col=name,
            )
    return text.isin(TRUE_TOKENS).to_numpy()


def _require_column(frame: pd.DataFrame, name: str) -> None:
    if name not in frame.columns:
        raise ParseError(f"column '{name}' not found in header", col=name)


def load_csv(
    path: str | Path,
    label_column: str | None = None,
    exclude_column: str | None = None,
) -> Dataset:
    """
    Load a numeric CSV file.

    Args:
        path: CSV file with a header row
        label_column: Optional column of ground-truth labels 0..g'−1
        exclude_column: Optional 0/1 column of rows to leave out of scoring

    Returns:
        Dataset: Features with the label and exclusion columns stripped

    Raises:
        ParseError: If the file cannot be read or a cell is not a number
        MissingValueError: If a cell is empty or NaN
        LabelNotIntegerError: If labels are not contiguous integers
    """
    path = Path(path)
    frame = _read_text(path)
    special = [name for name in (label_column, exclude_column) if name]
    for name in special:
        _require_column(frame, name)

    features = [str(c) for c in frame.columns if c not in special]
    if not features:
        raise ParseError(
            "no feature columns left after removing labels", path=str(path)
        )
    rows = np.column_stack([_numeric_column(frame, name) for name in features])

    labels = _labels(frame, label_column) if label_column else None
    mask = _mask(frame, exclude_column) if exclude_column else None

    logger.info(f"Loaded {rows.shape[0]}×{rows.shape[1]} data from {path}")
    return Dataset(rows, features, labels, mask)


def write_csv(
    dataset: Dataset,
    path: str | Path,
    label_column: str = "label",
    exclude_column: str = "excluded",
) -> Path:
    """Write a dataset in the format ``load_csv`` reads back."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dataset.to_frame(label_column, exclude_column).to_csv(
        path, index=False, float_format="%.17g"
    )
    logger.info(f"Wrote {dataset.n} rows to {path}")
    return path
