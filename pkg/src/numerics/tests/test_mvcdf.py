"""
Unit tests for the randomized-lattice multivariate normal and t CDFs.

Known orthant probabilities are compared within three reported standard
errors; a small absolute floor covers cases where the estimator is exact.
"""

import math

import numpy as np
import pytest
from scipy import stats

from ...exceptions import (
    DimensionTooLargeError,
    InvalidDrawCountError,
    NotPositiveDefiniteError,
)
from ..densities import t_cdf
from ..mvcdf import mvn_cdf, mvn_cdf_many, mvt_cdf, mvt_cdf_many

FLOOR = 1e-6


def within(estimate, se, expected) -> bool:
    return abs(estimate - expected) <= 3.0 * se + FLOOR


class TestMvnCdf:
    """Test the multivariate normal CDF."""

    def test_univariate_reduction(self):
        result = mvn_cdf([0.0], [[1.0]])

        assert result.estimate == pytest.approx(0.5)
        assert result.se == 0.0

    def test_independent_orthant(self):
        estimate, se = mvn_cdf([0.0, 0.0], np.eye(2))

        assert within(estimate, se, 0.25)

    def test_correlated_orthant(self):
        rho = 0.5
        expected = 0.25 + math.asin(rho) / (2.0 * math.pi)

        estimate, se = mvn_cdf([0.0, 0.0], [[1.0, rho], [rho, 1.0]], draws=20_000)

        assert within(estimate, se, expected)

    def test_trivariate_against_scipy(self):
        sigma = np.array([[1.0, 0.3, 0.2], [0.3, 1.5, -0.4], [0.2, -0.4, 0.8]])
        upper = np.array([0.4, 1.1, -0.3])

        estimate, se = mvn_cdf(upper, sigma, draws=40_000, seed=5)
        reference = stats.multivariate_normal(np.zeros(3), sigma).cdf(upper)

        assert estimate == pytest.approx(reference, abs=1e-4)
        assert se < 1e-3

    def test_infinite_limits(self):
        estimate, se = mvn_cdf([np.inf, 0.0], [[1.0, 0.6], [0.6, 1.0]])

        assert within(estimate, se, 0.5)

    def test_deterministic_given_seed(self):
        sigma = [[1.0, 0.2], [0.2, 1.0]]

        first = mvn_cdf([0.3, -0.1], sigma, seed=11)
        second = mvn_cdf([0.3, -0.1], sigma, seed=11)

        assert first == second

    def test_monotone_on_sorted_grid(self):
        sigma = [[1.0, 0.7], [0.7, 1.0]]
        grid = np.linspace(-2.0, 2.0, 9)
        uppers = np.column_stack([grid, grid])

        batch = mvn_cdf_many(uppers, sigma)

        assert np.all(np.diff(batch.estimate) > 0.0)

    def test_batch_matches_single_calls(self):
        sigma = [[1.0, 0.2], [0.2, 2.0]]
        uppers = np.array([[0.0, 0.0], [1.0, -0.5]])

        batch = mvn_cdf_many(uppers, sigma, seed=3)

        for row, estimate in zip(uppers, batch.estimate, strict=True):
            assert mvn_cdf(row, sigma, seed=3).estimate == pytest.approx(estimate)

    def test_dimension_cap(self):
        with pytest.raises(DimensionTooLargeError):
            mvn_cdf(np.zeros(7), np.eye(7))

    def test_draw_minimum(self):
        with pytest.raises(InvalidDrawCountError):
            mvn_cdf([0.0, 0.0], np.eye(2), draws=100)

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefiniteError):
            mvn_cdf([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])


class TestMvtCdf:
    """Test the multivariate t CDF."""

    @pytest.mark.parametrize("upper", [-1.5, 0.0, 0.8])
    def test_univariate_reduction(self, upper):
        estimate, se = mvt_cdf([upper], [[1.0]], 3.0)

        assert abs(estimate - t_cdf(upper, 3.0)) <= 3.0 * se + 1e-12

    @pytest.mark.parametrize("nu", [1.0, 4.0, 50.0])
    def test_central_symmetry(self, nu):
        estimate, se = mvt_cdf([0.0, 0.0], np.eye(2), nu)

        assert within(estimate, se, 0.25)

    def test_large_dof_matches_normal(self):
        sigma = [[1.0, 0.3], [0.3, 1.0]]
        upper = [0.5, -0.2]

        t_estimate, t_se = mvt_cdf(upper, sigma, 1e6)
        n_estimate, n_se = mvn_cdf(upper, sigma)

        assert abs(t_estimate - n_estimate) <= 3.0 * (t_se + n_se) + 1e-5

    def test_correlated_against_scipy(self):
        sigma = np.array([[1.0, 0.4], [0.4, 1.0]])
        upper = np.array([0.7, 0.2])

        estimate, _ = mvt_cdf(upper, sigma, 5.0, draws=40_000, seed=2)
        reference = stats.multivariate_t(np.zeros(2), sigma, df=5.0).cdf(upper)

        assert estimate == pytest.approx(reference, abs=2e-4)

    def test_batch_monotone(self):
        grid = np.linspace(-1.5, 1.5, 7)
        uppers = np.column_stack([grid, np.zeros_like(grid)])

        batch = mvt_cdf_many(uppers, [[1.0, -0.3], [-0.3, 1.0]], 6.0)

        assert np.all(np.diff(batch.estimate) > 0.0)
