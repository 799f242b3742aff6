"""
Unit tests for end-to-end clustering runs.
"""

import json
from pathlib import Path

import pytest

from ...config.config_model import RunConfig
from ...exceptions import ConfigurationError
from ..dataset import write_csv
from ..runner import EXIT_CONVERGED, EXIT_ERROR, EXIT_MAX_ITER, error_result, run
from ..synthetic import make_synthetic_dlbcl_like


@pytest.fixture
def labelled_csv(tmp_path: Path) -> Path:
    """A small labelled synthetic sample on disk."""
    return write_csv(make_synthetic_dlbcl_like(400, seed=3), tmp_path / "cells.csv")


def _config(data_path: Path, output_dir: Path, **overrides) -> RunConfig:
    values = {
        "data_path": data_path,
        "output_dir": output_dir,
        "family": "rmsn",
        "g": 3,
        "max_iter": 200,
        "tol": 1e-6,
        "label_column": "label",
        "exclude_column": "excluded",
    }
    values.update(overrides)
    return RunConfig(**values)


def _report(result) -> dict:
    return json.loads(result.report_path.read_text())


class TestRun:
    """Test artifacts, exit codes and error records."""

    def test_writes_artifacts(self, labelled_csv, tmp_path):
        result = run(_config(labelled_csv, tmp_path / "out"))

        report = _report(result)
        for name in ("model.json", "labels.csv", "trace.csv", "report.json"):
            assert (tmp_path / "out" / name).is_file()
        assert result.exit_code == report["exit_code"]
        assert report["status"] in ("converged", "max_iter")
        assert 0.0 <= report["misclassification_rate"] <= 1.0
        assert report["n"] == 400 and report["p"] == 3
        assert report["n_scored"] < 400
        assert report["seed"] == 0

    def test_converged_exit_code(self, labelled_csv, tmp_path):
        result = run(_config(labelled_csv, tmp_path / "out", tol=1e-3))

        assert result.exit_code == EXIT_CONVERGED
        assert result.report.converged

    def test_max_iter_exit_code(self, labelled_csv, tmp_path):
        result = run(_config(labelled_csv, tmp_path / "out", max_iter=1, tol=1e-300))

        assert result.exit_code == EXIT_MAX_ITER
        assert _report(result)["status"] == "max_iter"

    def test_unlabelled_has_no_rate(self, labelled_csv, tmp_path):
        config = _config(labelled_csv, tmp_path / "out", label_column=None)

        report = _report(run(config))

        assert report["misclassification_rate"] is None

    def test_byte_identical_model(self, labelled_csv, tmp_path):
        first = run(_config(labelled_csv, tmp_path / "a", family="rmst", max_iter=20))
        second = run(_config(labelled_csv, tmp_path / "b", family="rmst", max_iter=20))

        assert first.exit_code == second.exit_code
        assert (tmp_path / "a" / "model.json").read_bytes() == (
            tmp_path / "b" / "model.json"
        ).read_bytes()

    def test_report_variant(self, labelled_csv, tmp_path):
        run(_config(labelled_csv, tmp_path / "out", max_iter=5, report_variant="sni"))

        model = json.loads((tmp_path / "out" / "model.json").read_text())
        assert all(c["variant"]["tag"] == "SNI" for c in model["components"])

    def test_bad_data_records_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\nNaN,3\n")

        config = _config(
            path, tmp_path / "out", label_column=None, exclude_column=None
        )
        result = run(config)

        report = _report(result)
        assert result.exit_code == EXIT_ERROR
        assert report["status"] == "error"
        assert report["error"]["error_type"] == "MissingValueError"
        assert report["error"]["category"] == "data"
        assert report["error"]["details"] == {"row": 2, "col": "x"}
        assert not (tmp_path / "out" / "model.json").exists()

    def test_too_many_components(self, labelled_csv, tmp_path):
        result = run(_config(labelled_csv, tmp_path / "out", g=120))

        assert result.exit_code == EXIT_ERROR
        assert _report(result)["error"]["error_type"] == "InitFailedError"

    def test_progress_callback(self, labelled_csv, tmp_path):
        iterations = []

        run(
            _config(labelled_csv, tmp_path / "out", max_iter=3, tol=1e-300),
            callback=lambda iteration, *_args, **_kw: iterations.append(iteration),
        )

        assert iterations == [1, 2, 3]


class TestErrorResult:
    """Test the error report written outside a fit."""

    def test_writes_report(self, tmp_path):
        error = ConfigurationError("bad tol", config_path="run.yaml")

        result = error_result(error, tmp_path / "new" / "out", "configuration", g=3)

        report = _report(result)
        assert result.exit_code == EXIT_ERROR
        assert result.report_path == tmp_path / "new" / "out" / "report.json"
        assert report["status"] == "error"
        assert report["exit_code"] == EXIT_ERROR
        assert report["g"] == 3
        assert report["family"] is None
        assert report["seed"] == 0
        assert report["error"]["category"] == "configuration"
        assert report["error"]["context"] == "configuration"
        assert report["error"]["details"] == {"config_path": "run.yaml"}
