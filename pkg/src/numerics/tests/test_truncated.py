"""
Unit tests for truncated-distribution moments and samplers.

Closed forms are checked against adaptive quadrature of the conditional
density on the positive half-line.
"""

import itertools
import math

import numpy as np
import pytest
from scipy import integrate, stats

from ...exceptions import InvalidVarianceError, MomentUndefinedError
from ..truncated import (
    sample_truncated_normal,
    sample_truncated_t,
    trunc_norm_moments,
    trunc_t_mean,
    trunc_t_moments,
    truncated_t_ppf,
)

MU_GRID = (-3.0, -1.5, 0.0, 1.5, 3.0)
VAR_GRID = (0.25, 1.0, 4.0)
NU_GRID = (3.0, 5.0, 10.0, 100.0)
MOMENT_GRID = [
    (mu, VAR_GRID[i % 3], nu)
    for i, (mu, nu) in enumerate(itertools.product(MU_GRID, NU_GRID))
]


def quadrature_moments(density, mass: float, cut: float) -> tuple[float, float]:
    """First two moments of ``density`` on (0, inf), normalized by ``mass``."""
    moments = []
    for power in (1, 2):
        def integrand(x, power=power):
            return x**power * density(x)

        head, _ = integrate.quad(
            integrand, 0.0, cut, epsabs=0.0, epsrel=1e-13, limit=200
        )
        tail, _ = integrate.quad(
            integrand, cut, np.inf, epsabs=0.0, epsrel=1e-12, limit=200
        )
        moments.append((head + tail) / mass)
    return moments[0], moments[1]


class TestTruncNormMoments:
    """Test moments of the positively truncated normal."""

    def test_half_normal(self):
        moments = trunc_norm_moments(0.0, 1.0)

        assert moments.m1 == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-12)
        assert moments.m2 == pytest.approx(1.0, abs=1e-12)

    def test_truncation_vanishes(self):
        moments = trunc_norm_moments(40.0, 2.0)

        assert moments.m1 == pytest.approx(40.0)
        assert moments.m2 == pytest.approx(40.0**2 + 2.0)

    @pytest.mark.parametrize("mu,var", list(itertools.product(MU_GRID, VAR_GRID)))
    def test_quadrature_oracle(self, mu, var):
        sd = math.sqrt(var)
        density = stats.norm(mu, sd).pdf
        mass = stats.norm.sf(0.0, mu, sd)

        cut = mu + 40.0 * sd if mu > 0 else 40.0 * sd
        m1, m2 = quadrature_moments(density, mass, cut)
        moments = trunc_norm_moments(mu, var)

        assert moments.m1 == pytest.approx(m1, rel=1e-9, abs=1e-12)
        assert moments.m2 == pytest.approx(m2, rel=1e-9, abs=1e-12)

    def test_vectorized(self):
        mu = np.array([-1.0, 0.0, 2.0])
        moments = trunc_norm_moments(mu, np.ones(3))

        assert moments.m1.shape == (3,)
        assert np.all(moments.m2 >= moments.m1**2)

    def test_invalid_variance(self):
        with pytest.raises(InvalidVarianceError):
            trunc_norm_moments(0.0, 0.0)


class TestTruncTMoments:
    """Test moments of the positively truncated t."""

    def test_closed_form_at_three_dof(self):
        moments = trunc_t_moments(0.0, 1.0, 3.0)

        assert moments.m1 == pytest.approx(2.0 * math.sqrt(3.0) / math.pi, abs=1e-10)
        assert moments.m2 == pytest.approx(3.0, rel=1e-12)

    def test_normal_limit(self):
        moments = trunc_t_moments(0.0, 1.0, 1e6)

        assert moments.m1 == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-4)

    @pytest.mark.parametrize("mu,var,nu", MOMENT_GRID)
    def test_quadrature_oracle(self, mu, var, nu):
        sd = math.sqrt(var)
        density = stats.t(nu, mu, sd).pdf
        mass = stats.t.sf(0.0, nu, mu, sd)

        m1, m2 = quadrature_moments(density, mass, abs(mu) + 50.0 * sd)
        moments = trunc_t_moments(mu, var, nu)

        assert moments.m1 == pytest.approx(m1, rel=1e-8)
        assert moments.m2 == pytest.approx(m2, rel=1e-8)

    def test_second_moment_undefined(self):
        with pytest.raises(MomentUndefinedError):
            trunc_t_moments(0.0, 1.0, 1.5)

    def test_mean_defined_between_one_and_two(self):
        nu = 1.5
        f0 = math.exp(
            math.lgamma((nu + 1) / 2)
            - math.lgamma(nu / 2)
            - 0.5 * math.log(nu * math.pi)
        )

        assert trunc_t_mean(0.0, 1.0, nu) == pytest.approx(2.0 * f0 * nu / (nu - 1.0))

    def test_mean_undefined_below_one(self):
        with pytest.raises(MomentUndefinedError):
            trunc_t_mean(0.0, 1.0, 1.0)

    def test_infinite_dof_is_normal(self):
        assert trunc_t_moments(0.4, 2.0, math.inf) == trunc_norm_moments(0.4, 2.0)


class TestSamplers:
    """Test inverse-CDF samplers for the positive half-line."""

    def test_truncated_normal_mean(self):
        rng = np.random.default_rng(0)
        draws = sample_truncated_normal(-1.0, 2.0, 200_000, rng)
        moments = trunc_norm_moments(-1.0, 4.0)
        se = math.sqrt(moments.variance / draws.size)

        assert np.all(draws >= 0.0)
        assert abs(draws.mean() - moments.m1) < 4.0 * se

    def test_far_negative_location_stays_finite(self):
        rng = np.random.default_rng(1)
        draws = sample_truncated_normal(-30.0, 1.0, 1000, rng)

        assert np.all(np.isfinite(draws))
        assert draws.mean() < 0.1

    def test_truncated_t_quantiles(self):
        u = np.array([0.1, 0.5, 0.9])
        x = truncated_t_ppf(u, 0.5, 1.5, 4.0)
        dist = stats.t(4.0, 0.5, 1.5)
        mass = dist.sf(0.0)

        np.testing.assert_allclose((dist.cdf(x) - dist.cdf(0.0)) / mass, u, rtol=1e-9)

    def test_truncated_t_mean(self):
        rng = np.random.default_rng(2)
        draws = sample_truncated_t(0.3, 1.2, 6.0, 200_000, rng)
        moments = trunc_t_moments(0.3, 1.44, 6.0)
        se = math.sqrt(moments.variance / draws.size)

        assert np.all(draws >= 0.0)
        assert abs(draws.mean() - moments.m1) < 4.0 * se
