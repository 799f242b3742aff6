"""
Unit tests for conditioning/convolution parameter conversion.
"""

import numpy as np
import pytest
from scipy import stats

from ...custom_types import Representation
from ...exceptions import InfeasibleSkewnessError, NotPositiveDefiniteError
from ...skewdist.params import CanonicalRestrictedParams, UnrestrictedParams
from ...skewdist.sampling import sample
from ...skewdist.tests.factories import (
    feasible_delta,
    feasible_unrestricted_delta,
    random_spd,
)
from ..convolution import (
    ConvolutionParams,
    conditioning_to_convolution,
    convolution_to_conditioning,
    convolution_to_unrestricted,
    unrestricted_to_convolution,
)


class TestConditioningToConvolution:
    """Test the restricted rank-one downdate."""

    def test_zero_skew(self):
        sigma = np.array([[2.0, 0.3], [0.3, 1.0]])
        params = CanonicalRestrictedParams([0.0, 0.0], sigma, [0.0, 0.0])

        np.testing.assert_allclose(
            conditioning_to_convolution(params).sigma_tilde, sigma, atol=1e-15
        )

    def test_hand_downdate(self):
        params = CanonicalRestrictedParams([0.0, 0.0], np.eye(2), [0.6, 0.0])

        converted = conditioning_to_convolution(params)

        np.testing.assert_allclose(converted.sigma_tilde, [[0.64, 0.0], [0.0, 1.0]])
        np.testing.assert_array_equal(converted.delta_tilde, [0.6, 0.0])

    def test_infeasible_skew(self):
        with pytest.raises(InfeasibleSkewnessError):
            conditioning_to_convolution(
                CanonicalRestrictedParams([0.0, 0.0], np.eye(2), [0.8, 0.6])
            )

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        for p in range(1, 6):
            sigma = random_spd(rng, p)
            params = CanonicalRestrictedParams(
                rng.normal(size=p), sigma, feasible_delta(rng, sigma), nu=6.0
            )

            back = convolution_to_conditioning(conditioning_to_convolution(params))

            np.testing.assert_allclose(back.sigma, params.sigma, atol=1e-12)
            np.testing.assert_allclose(back.delta, params.delta, atol=1e-12)
            assert back.nu == 6.0

    def test_inverse_is_always_feasible(self):
        params = ConvolutionParams([0.0, 0.0], np.eye(2), [5.0, -3.0])

        canonical = convolution_to_conditioning(params)

        assert canonical.skew_variance > 0.0

    def test_same_law_as_conditioning(self):
        params = CanonicalRestrictedParams([0.0, 1.0], np.eye(2), [0.7, -0.2])
        converted = conditioning_to_convolution(params)
        rng = np.random.default_rng(5)
        n = 10_000
        latent = np.abs(rng.standard_normal(n))
        noise = rng.multivariate_normal(np.zeros(2), converted.sigma_tilde, size=n)
        by_hand = converted.mu + np.outer(latent, converted.delta_tilde) + noise

        rejected = sample(params, n, Representation.CONDITIONING, seed=6).rows

        for j in range(2):
            assert stats.ks_2samp(by_hand[:, j], rejected[:, j]).pvalue > 0.001


class TestUnrestrictedConvolution:
    """Test the unrestricted diagonal downdate."""

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        sigma = random_spd(rng, 3)
        params = UnrestrictedParams(
            np.zeros(3), sigma, feasible_unrestricted_delta(rng, sigma)
        )

        converted = unrestricted_to_convolution(params)
        back = convolution_to_unrestricted(converted)

        np.testing.assert_allclose(
            converted.sigma_tilde, sigma - np.diag(params.delta**2), atol=1e-12
        )
        np.testing.assert_allclose(back.sigma, params.sigma, atol=1e-12)


class TestConvolutionParams:
    """Test validation of convolution parameters."""

    def test_non_spd(self):
        with pytest.raises(NotPositiveDefiniteError):
            ConvolutionParams([0.0, 0.0], [[1.0, 1.5], [1.5, 1.0]], [0.0, 0.0])

    def test_dim(self):
        assert ConvolutionParams([0.0], [[1.0]], [0.2], nu=3.0).dim == 1
