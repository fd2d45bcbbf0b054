import math

import numpy as np
import pytest
from scipy import stats

from apps.core.exceptions import (
    DegenerateDesignError,
    DegenerateVarianceError,
    InsufficientDataError,
    ParameterDomainError,
)
from apps.distributions.families import Normal
from apps.mos.regression import fit_mos, mos_predict_plugin
from apps.mos.training import TrainingSet
from apps.ngr import fitting
from apps.ngr.fitting import NgrFit, OptimizerSettings, fit_ngr, ngr_predict_plugin
from apps.ngr.likelihood import (
    NgrParams,
    ngr_exact_log_likelihood,
    ngr_log_likelihood,
)


def simulate_ngr(rng, n, a=0.0, b=1.0, c=0.5, d=0.5):
    m = rng.normal(0.0, 1.0, size=n)
    v = 0.1 + rng.exponential(1.5, size=n)
    y = rng.normal(a + b * m, np.sqrt(c + d * v))
    return TrainingSet(m, v, y)


class TestLogLikelihood:
    def test_single_point_at_mean(self):
        train = TrainingSet.from_records([(0, 1, 0)])

        assert ngr_log_likelihood(NgrParams(0, 0, 1, 0), train) == 0.0

    def test_unit_residual(self):
        train = TrainingSet.from_records([(0, 1, 1)])

        assert ngr_log_likelihood(NgrParams(0, 0, 1, 0), train) == -1.0

    def test_zero_residuals(self):
        train = TrainingSet.from_records([(0, 2, 0), (1, 2, 1)])

        loglik = ngr_log_likelihood(NgrParams(0, 1, 1, 1), train)

        assert loglik == pytest.approx(-2 * math.log(3))
        assert loglik == pytest.approx(-2.1972, abs=1e-4)

    def test_non_positive_variance(self):
        train = TrainingSet.from_records([(0, 1, 0)])

        with pytest.raises(ParameterDomainError, match="must be positive"):
            ngr_log_likelihood(NgrParams(0, 0, -1, 0.5), train)  # act

    def test_exact_and_proportional_forms(self, training_set):
        params = NgrParams(0.3, 0.9, 0.4, 0.2)

        proportional = ngr_log_likelihood(params, training_set)
        exact = ngr_exact_log_likelihood(params, training_set)

        assert exact == pytest.approx(
            0.5 * proportional - 0.5 * training_set.n * math.log(2 * math.pi)
        )

    def test_d_zero_matches_normal_regression(self, training_set):
        params = NgrParams(0.5, 0.8, 0.7, 0.0)
        independent = stats.norm.logpdf(
            training_set.y, 0.5 + 0.8 * training_set.m, math.sqrt(0.7)
        ).sum()

        assert ngr_exact_log_likelihood(params, training_set) == pytest.approx(independent)

    def test_negative_d_rejected(self):
        with pytest.raises(ParameterDomainError, match="non-negative"):
            NgrParams(0, 1, 1, -0.1)  # act


class TestFitNgr:
    def test_parameter_recovery(self):
        train = simulate_ngr(np.random.default_rng(3), 10_000)

        fit = fit_ngr(train)

        assert fit.converged
        for fitted, truth in zip(
            (fit.params.a, fit.params.b, fit.params.c, fit.params.d), (0.0, 1.0, 0.5, 0.5)
        ):
            assert fitted == pytest.approx(truth, abs=0.05)

    def test_constant_variance_matches_mos(self, training_set):
        train = TrainingSet(training_set.m, np.full(training_set.n, 1.3), training_set.y)
        n = train.n

        fit, mos = fit_ngr(train), fit_mos(train)

        assert fit.params.a == pytest.approx(mos.a_hat, abs=1e-6)
        assert fit.params.b == pytest.approx(mos.b_hat, abs=1e-6)
        assert fit.params.variance(1.3) == pytest.approx(mos.c2_hat * (n - 2) / n, abs=1e-6)

    def test_collinear_data_hits_floor(self):
        m = np.array([0.0, 1.0, 2.0, 3.0])
        train = TrainingSet(m, np.array([0.5, 1.0, 0.2, 0.8]), 2.0 + 3.0 * m)

        fit = fit_ngr(train)

        assert fit.converged
        assert fit.params.a == pytest.approx(2.0, abs=1e-6)
        assert fit.params.b == pytest.approx(3.0, abs=1e-6)
        assert fit.params.c == pytest.approx(fit.variance_floor, rel=1e-6)
        assert fit.params.variance(train.v).max() <= 1.01 * fit.variance_floor

    def test_permutation_invariance(self, training_set):
        permuted = training_set.take(np.random.default_rng(5).permutation(training_set.n))

        fit, permuted_fit = fit_ngr(training_set), fit_ngr(permuted)

        for name in ("a", "b", "c", "d"):
            assert getattr(permuted_fit.params, name) == pytest.approx(
                getattr(fit.params, name), abs=1e-9
            )

    def test_trace_never_decreases(self):
        fit = fit_ngr(simulate_ngr(np.random.default_rng(8), 60))

        assert len(fit.trace) > 1
        assert np.all(np.diff(fit.trace) >= 0)
        assert fit.log_likelihood >= fit.trace[-1] - 1e-9

    def test_d_is_never_negative(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            assert fit_ngr(simulate_ngr(rng, 25, d=0.0)).params.d >= 0.0

    def test_fit_beats_starting_point(self):
        train = simulate_ngr(np.random.default_rng(10), 200)
        mos = fit_mos(train)
        start = NgrParams(mos.a_hat, mos.b_hat, mos.c2_hat * 198 / 200, 1e-6)

        fit = fit_ngr(train)

        assert fit.log_likelihood > ngr_exact_log_likelihood(start, train)

    def test_budget_exhaustion_is_reported(self):
        opts = OptimizerSettings(max_evaluations=15, restarts=0)

        fit = fit_ngr(simulate_ngr(np.random.default_rng(11), 50), opts)

        assert fit.converged is False
        assert fit.evaluations <= 15 + 5

    def test_restart_tolerance_follows_incumbent(self, monkeypatch):
        calls = []
        simplex = fitting._simplex

        def recording(theta0, arguments, bounds, fatol, max_evaluations):
            result, trace = simplex(theta0, arguments, bounds, fatol, max_evaluations)
            calls.append((fatol, result.fun))
            return result, trace

        monkeypatch.setattr(fitting, "_simplex", recording)
        opts = OptimizerSettings(10_000, 1e-10, 1, 1e-3, 1e-8)

        fit_ngr(simulate_ngr(np.random.default_rng(12), 40), opts)

        assert len(calls) == 2
        (_, first_fun), (restart_fatol, _) = calls
        assert restart_fatol == 1e-10 * (1.0 + abs(first_fun))

    def test_too_few_cases(self):
        with pytest.raises(InsufficientDataError, match="at least 4"):
            fit_ngr(TrainingSet.from_records([(0, 1, 0), (1, 1, 1), (2, 1, 1)]))  # act

    def test_identical_means(self):
        train = TrainingSet.from_records([(1, 1, 0), (1, 2, 1), (1, 1, 2), (1, 3, 3)])

        with pytest.raises(DegenerateDesignError):
            fit_ngr(train)  # act

    def test_settings_come_from_django(self, settings):
        settings.RECAL_OPTIMIZER = {
            "MAX_EVALUATIONS": 123,
            "TOLERANCE": 1e-6,
            "RESTARTS": 3,
            "INITIAL_DELTA": 0.01,
            "VARIANCE_FLOOR": 1e-5,
        }

        opts = OptimizerSettings.from_settings()

        assert opts == OptimizerSettings(123, 1e-6, 3, 0.01, 1e-5)


class TestNgrPredictPlugin:
    @staticmethod
    def fit_with(a, b, c, d):
        return NgrFit(params=NgrParams(a, b, c, d), log_likelihood=0.0, converged=True, iterations=0)

    def test_spread_ignored_when_d_is_zero(self):
        assert ngr_predict_plugin(self.fit_with(0, 1, 1, 0), 2.0, 5.0) == Normal(2.0, 1.0)

    def test_direct_substitution(self):
        dist = ngr_predict_plugin(self.fit_with(1, 0.5, 0.2, 0.3), 2.0, 1.0)

        assert dist.mu == pytest.approx(2.0)
        assert dist.sigma2 == pytest.approx(0.5)

    def test_d_zero_equals_mos_plugin(self, training_set):
        mos = fit_mos(training_set)
        fit = self.fit_with(mos.a_hat, mos.b_hat, mos.c2_hat, 0.0)

        assert ngr_predict_plugin(fit, 0.7, 3.0) == mos_predict_plugin(mos, 0.7)

    def test_non_positive_variance(self):
        fit = self.fit_with(0, 1, 0.0, 0.0)

        with pytest.raises(DegenerateVarianceError, match="not positive"):
            ngr_predict_plugin(fit, 1.0, 0.0)  # act
