"""
End-to-end integration tests for the skewmix command line.

Runs the real CLI in a subprocess against synthetic data and checks the
written artifacts and exit codes.
"""

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
import yaml


def _flags(**options) -> list[str]:
    """Turn keyword options into '--name value' pairs."""
    return [
        item
        for name, value in options.items()
        for item in (f"--{name.replace('_', '-')}", str(value))
    ]


class TestFitCommand:
    """Test 'skewmix fit' with real data files."""

    def test_labelled_fit(self, run_cli, synthetic_csv: Path, tmp_path: Path):
        """A labelled run writes every artifact and scores the labels."""
        out = tmp_path / "results"
        flags = _flags(
            data=synthetic_csv,
            family="rmst",
            g=3,
            tol=1e-5,
            label_col="label",
            exclude_col="excluded",
            out=out,
        )

        code, stdout, stderr = run_cli("fit", *flags)

        assert code in (0, 2), stderr
        report = json.loads((out / "report.json").read_text())
        assert report["exit_code"] == code
        assert report["misclassification_rate"] < 0.1
        assert "misclassification rate" in stdout
        labels = pd.read_csv(out / "labels.csv")
        assert list(labels.columns) == ["row", "label"]
        assert len(labels) == 600
        trace = pd.read_csv(out / "trace.csv")
        assert np.all(np.diff(trace["loglik"]) >= -1e-8)

    def test_max_iter_exit_code(self, run_cli, synthetic_csv: Path, tmp_path: Path):
        flags = _flags(
            data=synthetic_csv,
            family="rmst",
            max_iter=1,
            tol=1e-300,
            out=tmp_path / "out",
        )

        code, _, _ = run_cli("fit", *flags, "--quiet")

        assert code == 2
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["status"] == "max_iter"
        assert report["iterations"] == 1

    def test_same_seed_same_model(self, run_cli, synthetic_csv: Path, tmp_path):
        """Two runs with the same seed write byte-identical models."""
        for name in ("a", "b"):
            flags = _flags(
                data=synthetic_csv,
                family="rmst",
                max_iter=15,
                seed=4,
                out=tmp_path / name,
            )
            run_cli("fit", *flags, "--quiet")

        first = (tmp_path / "a" / "model.json").read_bytes()
        assert first == (tmp_path / "b" / "model.json").read_bytes()

    def test_bad_data(self, run_cli, tmp_path: Path):
        data = tmp_path / "bad.csv"
        data.write_text("a,b\n1.0,2.0\n3.0,oops\n")

        code, _, stderr = run_cli("fit", "--data", data, "--out", tmp_path / "out")

        assert code == 1
        assert "cannot parse 'oops'" in stderr
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["error"]["error_type"] == "ParseError"
        assert report["error"]["details"] == {"row": 2, "col": "b"}

    def test_config_file(self, run_cli, synthetic_csv: Path, tmp_path: Path):
        """Flags override the configuration file."""
        config = tmp_path / "run.yaml"
        config.write_text(
            yaml.safe_dump(
                {
                    "fit": {"family": "rmsn", "g": 2, "max_iter": 3, "tol": 1e-300},
                    "output": {"output_dir": str(tmp_path / "from_config")},
                }
            )
        )

        code, _, _ = run_cli(
            "fit", "--data", synthetic_csv, "--config", config, "--g", "3", "-q"
        )

        assert code == 2
        report = json.loads((tmp_path / "from_config" / "report.json").read_text())
        assert report["g"] == 3
        assert report["family"] == "rmsn"

    def test_invalid_config(self, run_cli, synthetic_csv: Path, tmp_path: Path):
        config = tmp_path / "bad.yaml"
        config.write_text("fit:\n  g: 0\n")

        out = tmp_path / "out"

        code, _, stderr = run_cli(
            "fit", "--data", synthetic_csv, "--config", config, "--out", out
        )

        assert code == 1
        assert "Invalid configuration" in stderr
        report = json.loads((out / "report.json").read_text())
        assert report["status"] == "error"
        assert report["error"]["category"] == "configuration"
        assert report["error"]["details"]["config_path"] == str(config)

    def test_invalid_flag_writes_report(
        self, run_cli, synthetic_csv: Path, tmp_path: Path
    ):
        """Flag validation failures still leave an error report."""
        out = tmp_path / "out"

        code, _, stderr = run_cli(
            "fit", *_flags(data=synthetic_csv, family="rmst", g=2, tol=-1, out=out)
        )

        assert code == 1
        assert "Invalid configuration" in stderr
        report = json.loads((out / "report.json").read_text())
        assert report["status"] == "error"
        assert report["exit_code"] == 1
        assert report["family"] == "rmst"
        assert report["g"] == 2
        assert report["error"]["category"] == "configuration"
        assert report["error"]["error_type"] == "ConfigurationError"
        assert "tol" in report["error"]["message"]
        assert not (out / "model.json").exists()

    def test_missing_data_file(self, run_cli, tmp_path: Path):
        code, _, _ = run_cli("fit", "--data", tmp_path / "none.csv")
        assert code == 2  # click usage error


class TestOtherCommands:
    """Test simulate, score, validate-config and --version."""

    def test_simulate(self, run_cli, tmp_path: Path):
        out = tmp_path / "sim.csv"

        code, stdout, _ = run_cli("simulate", "--out", out, "--n", "250", "--seed", "2")

        assert code == 0
        assert "Wrote 250 rows" in stdout
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["CD3", "CD5", "CD19", "label", "excluded"]
        assert len(frame) == 250

    def test_score(self, run_cli, tmp_path: Path):
        pred = tmp_path / "pred.csv"
        truth = tmp_path / "truth.csv"
        pred.write_text("row,label\n0,1\n1,1\n2,1\n3,0\n")
        truth.write_text("row,label\n0,0\n1,0\n2,1\n3,1\n")

        code, stdout, _ = run_cli("score", pred, truth, "--json-output")

        assert code == 0
        assert json.loads(stdout) == {"misclassification_rate": 0.25, "n": 4}

    def test_score_with_exclusions(self, run_cli, tmp_path: Path):
        pred = tmp_path / "pred.csv"
        truth = tmp_path / "truth.csv"
        pred.write_text("row,label\n0,1\n1,1\n2,1\n3,0\n")
        truth.write_text("label,excluded\n0,0\n1,0\n1,1\n1,0\n")

        code, stdout, _ = run_cli(
            "score", pred, truth, "--exclude-col", "excluded", "--json-output"
        )

        assert code == 0
        assert json.loads(stdout)["misclassification_rate"] == pytest.approx(1 / 3)

    def test_score_length_mismatch(self, run_cli, tmp_path: Path):
        pred = tmp_path / "pred.csv"
        truth = tmp_path / "truth.csv"
        pred.write_text("label\n0\n1\n")
        truth.write_text("label\n0\n1\n1\n")

        code, _, stderr = run_cli("score", pred, truth)

        assert code == 1
        assert "differ in length" in stderr

    def test_validate_config(self, run_cli, project_root: Path, tmp_path: Path):
        fixtures = project_root / "src" / "config" / "tests" / "fixtures"

        good, stdout, _ = run_cli("validate-config", fixtures / "valid_config.yaml")
        bad, _, stderr = run_cli("validate-config", fixtures / "invalid_config.yaml")

        assert good == 0
        assert "valid" in stdout
        assert bad == 1
        assert "validation failed" in stderr

    def test_version(self, run_cli):
        code, stdout, _ = run_cli("--version")

        assert code == 0
        assert "skewmix" in stdout
        assert "0.1.0" in stdout
