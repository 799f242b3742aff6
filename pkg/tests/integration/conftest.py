"""
Configuration and fixtures for integration tests.
"""

import subprocess
import sys
from pathlib import Path
from typing import Callable

import pytest

CliRunner = Callable[..., tuple[int, str, str]]


@pytest.fixture(scope="session")
def integration_test_dir() -> Path:
    """Get the integration test directory."""
    return Path(__file__).parent


@pytest.fixture(scope="session")
def run_cli(project_root: Path) -> CliRunner:
    """
    Run the skewmix command line and return (exit_code, stdout, stderr).

    The module is run from the project root so the package need not be
    installed.
    """

    def _run(*args: str | Path, timeout: float = 300.0) -> tuple[int, str, str]:
        result = subprocess.run(
            [sys.executable, "-m", "src.cli", *map(str, args)],
            capture_output=True,
            text=True,
            cwd=project_root,
            timeout=timeout,
        )
        return result.returncode, result.stdout, result.stderr

    return _run
