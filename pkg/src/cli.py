"""
Command-line interface for skewmix.

Fits skew normal and skew t mixtures to CSV data, writes cluster labels and
model artifacts, simulates the bundled synthetic dataset and scores label
files against each other.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any

import click

from . import __version__
from .cluster.artifacts import read_labels_csv
from .cluster.dataset import write_csv
from .cluster.runner import EXIT_ERROR, error_result, run
from .cluster.scoring import misclassification_rate
from .cluster.synthetic import DEAD_CELL_FRACTION, make_synthetic_dlbcl_like
from .config import ConfigLoader, RunConfig, configure_logging, load_config_from_path
from .custom_types import DofUpdate, Family, VariantTag
from .exceptions import ConfigurationError, SkewMixError


def get_version() -> str:
    """
    Read the version from pyproject.toml, falling back to the package version.
    """
    try:
        import tomllib

        pyproject_path = Path(__file__).parent.parent / "pyproject.toml"
        with open(pyproject_path, "rb") as f:
            return str(tomllib.load(f)["project"]["version"])
    except Exception as e:
        logger.debug(f"Could not extract version from pyproject.toml: {e}")
        return __version__


logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

_EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


class CLIProgressReporter:
    """Per-iteration EM progress for the terminal."""

    def __init__(self, verbose: bool = False, quiet: bool = False) -> None:
        self.verbose = verbose
        self.quiet = quiet
        self.last_iteration = 0

    def __call__(
        self,
        iteration: int,
        loglik: float,
        change: float,
        metadata: dict[str, Any] | None = None,
    ) -> None:
        self.last_iteration = iteration
        if self.quiet or not self.verbose:
            return
        line = f"iter {iteration:4d}  loglik {loglik:.6f}  change {change:.3e}"
        nus = (metadata or {}).get("nu")
        if nus and any(nu is not None for nu in nus):
            line += "  nu " + ", ".join(f"{nu:.2f}" for nu in nus if nu is not None)
        click.echo(line)


def _log_level(verbose: bool, quiet: bool) -> str | None:
    if verbose:
        return "DEBUG"
    if quiet:
        return "ERROR"
    return None


@click.group()
@click.version_option(version=get_version(), prog_name="skewmix")
def cli() -> None:
    """skewmix - skew normal and skew t mixture clustering.

    Fit finite mixtures of restricted or unrestricted skew normal and skew t
    distributions by EM, assign MAP cluster labels and score them.
    """


@cli.command()
@click.option(
    "--data",
    "data_path",
    required=True,
    type=_EXISTING_FILE,
    help="Input CSV with a header row",
)
@click.option(
    "--config",
    "config_path",
    type=_EXISTING_FILE,
    help="YAML configuration file (command-line flags take precedence)",
)
@click.option(
    "--family",
    type=click.Choice([f.value for f in Family], case_sensitive=False),
    help="Component family",
)
@click.option("--g", type=click.IntRange(min=1), help="Number of components")
@click.option("--max-iter", type=click.IntRange(min=0), help="Maximum EM iterations")
@click.option("--tol", type=float, help="Relative log-likelihood tolerance")
@click.option("--seed", type=click.IntRange(min=0), help="Random seed")
@click.option(
    "--init",
    type=click.Choice(["kmeans", "random"], case_sensitive=False),
    help="Initialization strategy",
)
@click.option(
    "--dof-update",
    type=click.Choice([d.value for d in DofUpdate], case_sensitive=False),
    help="Degrees-of-freedom update rule",
)
@click.option("--mc-draws", type=int, help="Monte-Carlo draws (unrestricted families)")
@click.option("--label-col", "label_column", help="Column of true labels to score")
@click.option("--exclude-col", "exclude_column", help="0/1 column of rows to skip")
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Artifact directory",
)
@click.option(
    "--report-variant",
    type=click.Choice([t.value for t in VariantTag], case_sensitive=False),
    help="Also report restricted components in this parameterization",
)
@click.option(
    "--workers", "max_workers", type=click.IntRange(min=1), help="E-step threads"
)
@click.option("--verbose", "-v", is_flag=True, help="Show every EM iteration")
@click.option("--quiet", "-q", is_flag=True, help="Suppress all output except errors")
def fit(
    data_path: Path,
    config_path: Path | None,
    verbose: bool,
    quiet: bool,
    **flags: Any,
) -> None:
    """Fit a mixture to a CSV file and write the run artifacts.

    Writes model.json, labels.csv, trace.csv and report.json. Exits 0 on
    convergence, 2 when --max-iter is reached first and 1 on error.

    Examples:
        skewmix fit --data cells.csv --family rmst --g 3 --out results

        skewmix fit --data cells.csv --config run.yaml --label-col label
    """
    config = None
    try:
        config = load_config_from_path(config_path)
        configure_logging(config.logging, _log_level(verbose, quiet))
        run_config = RunConfig.from_config(config, data_path, **flags)
    except (SkewMixError, ValueError) as e:
        click.echo(f"❌ Invalid configuration: {e}", err=True)
        error = e
        if not isinstance(e, SkewMixError):
            error = ConfigurationError(
                f"Invalid configuration: {e}",
                config_path=str(config_path) if config_path else None,
            )
        output_dir = flags["output_dir"] or (
            config.output.output_dir if config is not None else "output"
        )
        result = error_result(
            error,
            output_dir,
            "configuration",
            family=Family(flags["family"]) if flags["family"] else None,
            g=flags["g"],
            seed=flags["seed"] or 0,
        )
        if not quiet:
            click.echo(f"  report: {result.report_path}")
        sys.exit(result.exit_code)

    reporter = CLIProgressReporter(verbose=verbose, quiet=quiet)
    result = run(run_config, callback=reporter)
    report = result.report
    if not quiet:
        if report.status == "error" and report.error is not None:
            click.echo(f"❌ {report.error['message']}", err=True)
        else:
            click.echo(
                f"{'✅' if report.converged else '⚠️ '} {report.status}: "
                f"loglik {report.loglik:.6f} after {report.iterations} iterations"
            )
            if report.misclassification_rate is not None:
                rate = report.misclassification_rate
                click.echo(f"  misclassification rate: {rate:.4f}")
        click.echo(f"  report: {result.report_path}")
    sys.exit(result.exit_code)


@cli.command()
@click.option(
    "--out",
    "output_path",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="CSV file to write",
)
@click.option("--n", type=click.IntRange(min=1), default=3000, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option(
    "--dead-fraction",
    type=click.FloatRange(min=0.0, max=1.0, max_open=True),
    default=DEAD_CELL_FRACTION,
    show_default=True,
    help="Fraction of rows flagged in the 'excluded' column",
)
def simulate(output_path: Path, n: int, seed: int, dead_fraction: float) -> None:
    """Write the synthetic three-population CD3/CD5/CD19 dataset.

    The file has a 'label' column and an 'excluded' column, ready for
    'skewmix fit --label-col label --exclude-col excluded'.
    """
    dataset = make_synthetic_dlbcl_like(n, seed, dead_fraction)
    write_csv(dataset, output_path)
    click.echo(f"✅ Wrote {dataset.n} rows to {output_path}")


@cli.command()
@click.argument("pred_file", type=_EXISTING_FILE)
@click.argument("truth_file", type=_EXISTING_FILE)
@click.option("--pred-col", default="label", show_default=True)
@click.option("--truth-col", default="label", show_default=True)
@click.option("--exclude-col", help="0/1 column in TRUTH_FILE of rows to skip")
@click.option("--json-output", is_flag=True, help="Print the result as JSON")
def score(
    pred_file: Path,
    truth_file: Path,
    pred_col: str,
    truth_col: str,
    exclude_col: str | None,
    json_output: bool,
) -> None:
    """Misclassification rate of PRED_FILE labels against TRUTH_FILE labels.

    The rate is minimized over all relabellings of the predicted clusters.
    """
    try:
        pred = read_labels_csv(pred_file, pred_col)
        truth = read_labels_csv(truth_file, truth_col)
        exclude = read_labels_csv(truth_file, exclude_col) if exclude_col else None
        rate = misclassification_rate(
            pred, truth, None if exclude is None else exclude.astype(bool)
        )
    except SkewMixError as e:
        click.echo(f"❌ {e}", err=True)
        sys.exit(EXIT_ERROR)

    if json_output:
        click.echo(json.dumps({"misclassification_rate": rate, "n": int(pred.size)}))
    else:
        click.echo(f"misclassification rate: {rate:.6f}")


@cli.command(name="validate-config")
@click.argument("config_file", type=_EXISTING_FILE)
@click.option("--verbose", "-v", is_flag=True, help="Print the merged configuration")
def validate_config(config_file: Path, verbose: bool) -> None:
    """Validate a YAML configuration file.

    Examples:
        skewmix validate-config run.yaml --verbose
    """
    loader = ConfigLoader()
    ok, message = loader.validate_config_file(config_file)
    if not ok:
        click.echo(f"❌ Configuration validation failed: {message}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(f"✅ Configuration file is valid: {config_file}")
    if verbose:
        merged = loader.load_config(config_file).to_dict()
        for section, values in merged.items():
            click.echo(f"  {section}: {values}")


def main() -> None:
    """Main CLI entry point."""
    try:
        cli()
    except KeyboardInterrupt:
        print("\n⏹️  Cancelled by user", file=sys.stderr)
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
