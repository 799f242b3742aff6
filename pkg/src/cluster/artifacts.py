"""
Run artifacts: model.json, labels.csv, trace.csv and report.json.

model.json stores each Σ twice, as its lower-triangular Cholesky factor and
as the full matrix. Floats are written with repr precision, so a model read
back matches the one written to within rounding of L·Lᵀ.
"""

import json
import logging
from pathlib import Path
from typing import Any, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..custom_types import DofPolicy, Family, IntArray, VariantTag
from ..exceptions import DataError
from ..mixture.model import ComponentParams, MixtureModel
from ..paramx.variants import from_canonical
from ..skewdist.params import CanonicalRestrictedParams, UnrestrictedParams

logger = logging.getLogger(__name__)

MODEL_FILE = "model.json"
LABELS_FILE = "labels.csv"
TRACE_FILE = "trace.csv"
REPORT_FILE = "report.json"
MODEL_FORMAT_VERSION = 1


class RunReport(BaseModel):
    """
    Schema of report.json; every run validates its report against it.
    """

    status: Literal["converged", "max_iter", "error"]
    exit_code: Literal[0, 1, 2]
    family: Family | None = None
    g: int | None = Field(default=None, ge=1)
    n: int | None = Field(default=None, ge=1)
    p: int | None = Field(default=None, ge=1)
    loglik: float | None = None
    iterations: int | None = Field(default=None, ge=0)
    converged: bool | None = None
    misclassification_rate: float | None = Field(default=None, ge=0.0, le=1.0)
    n_scored: int | None = Field(default=None, ge=0)
    nu: list[float | None] | None = None
    seed: int
    wall_time: float = Field(ge=0.0)
    warnings: list[str] = Field(default_factory=list)
    artifacts: dict[str, str] = Field(default_factory=dict)
    error: dict[str, Any] | None = None

    model_config = ConfigDict(extra="forbid")


def _component_dict(
    component: ComponentParams, variant: VariantTag | None
) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "mu": component.mu.tolist(),
        "sigma_chol": np.tril(component.sigma_chol).tolist(),
        "sigma": component.sigma.tolist(),
        "delta": component.delta.tolist(),
        "nu": component.nu,
    }
    if variant is not None and isinstance(component, CanonicalRestrictedParams):
        expressed = from_canonical(component, variant)
        entry["variant"] = {"tag": expressed.tag.value, "skew": expressed.skew.tolist()}
    return entry


def model_to_dict(
    model: MixtureModel, variant: VariantTag | None = None
) -> dict[str, Any]:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "family": model.family.value,
        "dof_policy": model.dof_policy.value,
        "g": model.g,
        "dim": model.dim,
        "weights": model.weights.tolist(),
        "components": [_component_dict(c, variant) for c in model.components],
    }


def model_from_dict(data: dict[str, Any]) -> MixtureModel:
    """
    Rebuild a model; Σ comes from the stored factor.

    Raises:
        DataError: If required keys are missing
    """
    try:
        family = Family(data["family"])
        params_class = (
            CanonicalRestrictedParams if family.is_restricted else UnrestrictedParams
        )
        components = []
        for entry in data["components"]:
            factor = np.asarray(entry["sigma_chol"], dtype=float)
            components.append(
                params_class(
                    entry["mu"], factor @ factor.T, entry["delta"], entry["nu"]
                )
            )
        return MixtureModel(
            family,
            data["weights"],
            tuple(components),
            DofPolicy(data.get("dof_policy", DofPolicy.PER_COMPONENT.value)),
        )
    except (KeyError, TypeError) as e:
        raise DataError(f"malformed model description: {e}") from e


def _dump(payload: dict[str, Any], path: Path, indent: int) -> None:
    path.write_text(
        json.dumps(payload, indent=indent, allow_nan=False) + "\n", encoding="utf-8"
    )


def write_model_json(
    model: MixtureModel,
    path: str | Path,
    variant: VariantTag | None = None,
    indent: int = 2,
) -> Path:
    path = Path(path)
    _dump(model_to_dict(model, variant), path, indent)
    logger.info(f"Model written to {path}")
    return path


def read_model_json(path: str | Path) -> MixtureModel:
    """Restore a MixtureModel from model.json."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"cannot read model file {path}: {e}", path=str(path)) from e
    return model_from_dict(data)


def write_labels_csv(labels: IntArray, path: str | Path) -> Path:
    path = Path(path)
    frame = pd.DataFrame({"row": np.arange(labels.size), "label": labels})
    frame.to_csv(path, index=False)
    return path


def read_labels_csv(path: str | Path, column: str = "label") -> IntArray:
    """Read one integer label column, as written by ``write_labels_csv``."""
    frame = pd.read_csv(path)
    if column not in frame.columns:
        raise DataError(f"column '{column}' not found in {path}", col=column)
    return frame[column].to_numpy()


def write_trace_csv(trace: list[float], path: str | Path) -> Path:
    path = Path(path)
    frame = pd.DataFrame({"iteration": np.arange(len(trace)), "loglik": trace})
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def write_report_json(report: RunReport, path: str | Path, indent: int = 2) -> Path:
    path = Path(path)
    payload = RunReport.model_validate(report.model_dump()).model_dump(mode="json")
    _dump(payload, path, indent)
    logger.info(f"Report written to {path}")
    return path
