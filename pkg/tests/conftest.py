"""
Shared test fixtures for skewmix tests.
This module provides common test fixtures used across the top-level suites.
"""

from pathlib import Path

import numpy as np
import pytest

from src.cluster.dataset import Dataset, write_csv
from src.cluster.synthetic import make_synthetic_dlbcl_like


@pytest.fixture(scope="session")
def project_root() -> Path:
    """Get the project root directory."""
    return Path(__file__).parent.parent


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for test data."""
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def small_synthetic() -> Dataset:
    """
    Labelled three-population sample, small enough for fast fits.

    Returns:
        Dataset: 600 rows with 'label' and 'excluded' columns
    """
    return make_synthetic_dlbcl_like(600, seed=11)


@pytest.fixture
def synthetic_csv(tmp_path: Path, small_synthetic: Dataset) -> Path:
    """The small synthetic sample written to a CSV file."""
    return write_csv(small_synthetic, tmp_path / "cells.csv")
