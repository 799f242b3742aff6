"""
End-to-end clustering run: load, fit, label, score and write artifacts.
"""

import logging
import time
from dataclasses import dataclass
from pathlib import Path

from ..config.config_model import RunConfig
from ..custom_types import Family
from ..mixture.em import FitProgressCallback, FitReport, fit_em
from .artifacts import (
    LABELS_FILE,
    MODEL_FILE,
    REPORT_FILE,
    TRACE_FILE,
    RunReport,
    write_labels_csv,
    write_model_json,
    write_report_json,
    write_trace_csv,
)
from .dataset import Dataset, load_csv
from .error_recorder import ErrorRecorder
from .scoring import misclassification_rate

logger = logging.getLogger(__name__)

EXIT_CONVERGED = 0
EXIT_ERROR = 1
EXIT_MAX_ITER = 2


@dataclass
class RunResult:
    """Outcome of ``run``: exit code, the validated report and its path."""

    exit_code: int
    report: RunReport
    report_path: Path


def _fit_report(
    config: RunConfig,
    dataset: Dataset,
    fit: FitReport,
    artifacts: dict[str, str],
    wall_time: float,
) -> RunReport:
    rate, n_scored = None, None
    if dataset.true_labels is not None:
        rate = misclassification_rate(
            fit.labels, dataset.true_labels, dataset.excluded_mask
        )
        excluded = dataset.excluded_mask
        n_scored = dataset.n - (int(excluded.sum()) if excluded is not None else 0)
    converged = fit.converged
    return RunReport(
        status="converged" if converged else "max_iter",
        exit_code=EXIT_CONVERGED if converged else EXIT_MAX_ITER,
        family=config.family,
        g=config.g,
        n=dataset.n,
        p=dataset.p,
        loglik=fit.loglik,
        iterations=fit.iterations,
        converged=converged,
        misclassification_rate=rate,
        n_scored=n_scored,
        nu=list(fit.model.nus),
        seed=config.seed,
        wall_time=wall_time,
        warnings=list(fit.warnings),
        artifacts=artifacts,
    )


def error_result(
    error: BaseException,
    output_dir: str | Path,
    context: str,
    *,
    family: Family | None = None,
    g: int | None = None,
    seed: int = 0,
    indent: int = 2,
    wall_time: float = 0.0,
) -> RunResult:
    """
    Record ``error`` and write an error report.json into ``output_dir``.

    Returns:
        RunResult: exit code 1 and the error report
    """
    recorder = ErrorRecorder(debug_mode=logger.isEnabledFor(logging.DEBUG))
    report = RunReport(
        status="error",
        exit_code=EXIT_ERROR,
        family=family,
        g=g,
        seed=seed,
        wall_time=wall_time,
        error=recorder.record(error, context),
    )
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    report_path = write_report_json(report, output_dir / REPORT_FILE, indent)
    logger.info(f"Run failed during {context} (exit {EXIT_ERROR})")
    return RunResult(EXIT_ERROR, report, report_path)


def run(config: RunConfig, callback: FitProgressCallback | None = None) -> RunResult:
    """
    Fit ``config.family`` with ``config.g`` components and write the artifacts.

    Writes model.json, labels.csv, trace.csv and report.json into
    ``config.output_dir``. Errors are not raised: they are recorded in
    report.json and reported through the exit code.

    Returns:
        RunResult: exit code 0 on convergence, 2 when max_iter was reached
        without convergence, 1 on error
    """
    start = time.perf_counter()
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    report_path = output_dir / REPORT_FILE
    try:
        dataset = load_csv(config.data_path, config.label_column, config.exclude_column)
        fit = fit_em(
            dataset.rows,
            config.g,
            config.family,
            config.to_em_options(),
            callback=callback,
        )
        artifacts = {
            "model": str(
                write_model_json(
                    fit.model,
                    output_dir / MODEL_FILE,
                    config.report_variant,
                    config.indent,
                )
            ),
            "labels": str(write_labels_csv(fit.labels, output_dir / LABELS_FILE)),
            "trace": str(write_trace_csv(fit.loglik_trace, output_dir / TRACE_FILE)),
        }
        report = _fit_report(
            config, dataset, fit, artifacts, time.perf_counter() - start
        )
    except Exception as e:
        return error_result(
            e,
            output_dir,
            "run",
            family=config.family,
            g=config.g,
            seed=config.seed,
            indent=config.indent,
            wall_time=time.perf_counter() - start,
        )

    write_report_json(report, report_path, config.indent)
    logger.info(f"Run finished with status {report.status} (exit {report.exit_code})")
    return RunResult(report.exit_code, report, report_path)
