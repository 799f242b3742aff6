"""
Unit tests for the EM driver.
"""

import logging
import math

import numpy as np
import pytest

from ...custom_types import DofUpdate, Family
from ...exceptions import InitFailedError, ParameterError
from ...skewdist.params import CanonicalRestrictedParams, UnrestrictedParams
from ..em import EMOptions, fit_em, relative_change
from ..model import MixtureModel, sample_mixture


def _two_component_rows(n=600, seed=0):
    first = CanonicalRestrictedParams([0.0, 0.0], [[1.0, 0.3], [0.3, 1.0]], [0.9, 0.2])
    second = CanonicalRestrictedParams([5.0, 4.0], np.eye(2), [-0.4, 0.8])
    model = MixtureModel(Family.RMSN, [0.45, 0.55], (first, second))
    return sample_mixture(model, n, seed=seed)[0]


class TestEMOptions:
    """Test option validation."""

    def test_defaults(self):
        options = EMOptions()

        assert options.max_iter == 500
        assert options.tol == 1e-8
        assert options.dof_update is DofUpdate.ECME

    def test_coerces_strings(self):
        assert EMOptions(dof_update="osl").dof_update is DofUpdate.OSL

    @pytest.mark.parametrize(
        "kwargs", [{"max_iter": -1}, {"tol": 0.0}, {"n_starts": 0}, {"mc_draws": 10}]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            EMOptions(**kwargs)


class TestFitEm:
    """Test the EM loop."""

    def test_gaussian_maximum_likelihood(self):
        rows = np.random.default_rng(1).multivariate_normal(
            [1.0, 2.0, -1.0], [[2.0, 0.4, 0.1], [0.4, 1.0, 0.2], [0.1, 0.2, 0.5]], 400
        )
        n, p = rows.shape
        scatter = np.cov(rows, rowvar=False, bias=True)
        expected = -0.5 * n * (
            p * math.log(2.0 * math.pi) + np.linalg.slogdet(scatter)[1] + p
        )

        report = fit_em(rows, 1, Family.RMSN, EMOptions(fit_skewness=False))

        assert report.loglik == pytest.approx(expected, abs=1e-6)
        np.testing.assert_array_equal(report.model.components[0].delta, 0.0)

    def test_monotone_ascent(self):
        rows = _two_component_rows()

        report = fit_em(rows, 2, Family.RMSN, EMOptions(max_iter=100))

        steps = np.diff(report.loglik_trace)
        assert np.all(steps >= -1e-8)
        assert not report.warnings

    def test_tolerance_inf_skips_iterations(self):
        rows = _two_component_rows()

        report = fit_em(rows, 2, Family.RMSN, EMOptions(tol=math.inf))

        assert len(report.loglik_trace) == 1
        assert report.iterations == 0
        assert report.converged

    def test_max_iter_reached(self, caplog):
        rows = _two_component_rows()

        with caplog.at_level(logging.WARNING):
            report = fit_em(rows, 2, Family.RMSN, EMOptions(max_iter=2, tol=1e-300))

        assert report.iterations == 2
        assert not report.converged
        assert "No convergence" in caplog.text

    def test_labels_and_responsibilities(self):
        rows = _two_component_rows()

        report = fit_em(rows, 2, Family.RMSN)

        np.testing.assert_allclose(report.responsibilities.sum(axis=1), 1.0)
        assert report.labels.shape == (rows.shape[0],)
        assert report.labels.dtype == np.int64

    def test_bit_identical_reruns(self):
        rows = _two_component_rows()
        options = EMOptions(max_iter=20, seed=3)

        first = fit_em(rows, 2, Family.RMST, options)
        second = fit_em(rows, 2, Family.RMST, options)

        assert first.loglik_trace == second.loglik_trace
        np.testing.assert_array_equal(first.responsibilities, second.responsibilities)

    def test_worker_count_does_not_change_result(self):
        rows = _two_component_rows()

        serial = fit_em(rows, 2, Family.RMST, EMOptions(max_iter=10, chunk_size=64))
        threaded = fit_em(
            rows, 2, Family.RMST, EMOptions(max_iter=10, chunk_size=64, max_workers=4)
        )

        assert serial.loglik_trace == threaded.loglik_trace
        assert serial.model.nus == threaded.model.nus

    def test_callback(self):
        rows = _two_component_rows()
        calls = []

        def record(iteration, loglik, change, metadata=None):
            calls.append((iteration, loglik, metadata))

        report = fit_em(rows, 2, Family.RMST, EMOptions(max_iter=5), callback=record)

        assert [c[0] for c in calls] == list(range(1, report.iterations + 1))
        assert calls[-1][1] == report.loglik
        assert len(calls[-1][2]["nu"]) == 2

    def test_too_few_observations(self):
        with pytest.raises(InitFailedError):
            fit_em(np.zeros((6, 2)), 2, Family.RMSN)

    def test_non_finite_data(self):
        rows = _two_component_rows()
        rows[0, 0] = np.nan

        with pytest.raises(ParameterError):
            fit_em(rows, 2, Family.RMSN)

    def test_initial_model_mismatch(self):
        rows = _two_component_rows()
        start = MixtureModel(
            Family.RMSN, [1.0], (CanonicalRestrictedParams([0.0], [[1.0]], [0.0]),)
        )

        with pytest.raises(ParameterError):
            fit_em(rows, 2, Family.RMSN, initial_model=start)


class TestEquivariance:
    """Test behaviour under relabelling and affine rescaling."""

    def test_permutation(self):
        rows = _two_component_rows()
        start = fit_em(rows, 2, Family.RMSN, EMOptions(tol=math.inf)).model
        options = EMOptions(max_iter=15, tol=1e-300)

        original = fit_em(rows, 2, Family.RMSN, options, initial_model=start)
        swapped = fit_em(
            rows, 2, Family.RMSN, options, initial_model=start.permuted([1, 0])
        )

        np.testing.assert_allclose(
            swapped.model.weights, original.model.weights[[1, 0]], rtol=1e-10
        )
        np.testing.assert_allclose(
            swapped.responsibilities, original.responsibilities[:, [1, 0]], atol=1e-10
        )
        assert swapped.loglik == pytest.approx(original.loglik, rel=1e-12)

    def test_scale(self):
        rows = _two_component_rows()
        scale, shift = 3.0, np.array([2.0, -1.0])
        start = fit_em(rows, 2, Family.RMSN, EMOptions(tol=math.inf)).model
        scaled_start = MixtureModel(
            Family.RMSN,
            start.weights,
            tuple(
                CanonicalRestrictedParams(
                    scale * c.mu + shift, scale**2 * c.sigma, scale * c.delta
                )
                for c in start.components
            ),
        )
        options = EMOptions(max_iter=15, tol=1e-300)

        original = fit_em(rows, 2, Family.RMSN, options, initial_model=start)
        scaled = fit_em(
            scale * rows + shift, 2, Family.RMSN, options, initial_model=scaled_start
        )

        n, p = rows.shape
        assert scaled.loglik == pytest.approx(
            original.loglik - n * p * math.log(scale), rel=1e-6
        )
        pairs = zip(original.model.components, scaled.model.components, strict=True)
        for a, b in pairs:
            np.testing.assert_allclose(b.mu, scale * a.mu + shift, rtol=1e-6, atol=1e-6)
            np.testing.assert_allclose(b.delta, scale * a.delta, rtol=1e-6, atol=1e-6)


def _skew_t_rows():
    truth = CanonicalRestrictedParams(
        [0.0, 0.0], [[1.0, 0.3], [0.3, 1.0]], [1.0, 0.5], 5.0
    )
    return sample_mixture(MixtureModel(Family.RMST, [1.0], (truth,)), 5000, seed=4)[0]


class TestSkewTFits:
    """Test fits with the skew t families."""

    @pytest.mark.slow
    @pytest.mark.parametrize("dof_update", [DofUpdate.OSL, DofUpdate.ECME])
    def test_recovers_nu(self, dof_update):
        rows = _skew_t_rows()

        report = fit_em(rows, 1, Family.RMST, EMOptions(dof_update=dof_update))

        assert 3.5 <= report.model.components[0].nu <= 7.0

    @pytest.mark.slow
    def test_update_rules_agree(self):
        rows = _skew_t_rows()

        osl = fit_em(rows, 1, Family.RMST, EMOptions(dof_update=DofUpdate.OSL))
        ecme = fit_em(rows, 1, Family.RMST, EMOptions(dof_update=DofUpdate.ECME))

        assert abs(osl.model.components[0].nu - ecme.model.components[0].nu) < 0.5

    def test_unrestricted_monte_carlo_fit(self):
        truth = UnrestrictedParams([0.0, 0.0], np.eye(2), [0.8, -0.5], 6.0)
        model = MixtureModel(Family.UMST, [1.0], (truth,))
        rows, _ = sample_mixture(model, 200, seed=5)

        report = fit_em(rows, 1, Family.UMST, EMOptions(max_iter=3, seed=6))

        assert report.iterations == 3
        assert any("ECME" in message for message in report.warnings)
        assert np.isfinite(report.loglik)
        assert isinstance(report.model.components[0], UnrestrictedParams)


def test_relative_change():
    assert relative_change(-100.0, -99.0) == pytest.approx(1.0 / 101.0)
    assert relative_change(0.0, 0.0) == 0.0
