import numpy as np
import pytest

from apps.bootstrap.resampling import bootstrap_fit, bootstrap_predict
from apps.core.exceptions import InsufficientDataError, ParameterDomainError
from apps.core.seeding import derive_seed
from apps.harness.crossval import LEAVE_ONE_OUT, ROLLING, CvPlan, run_cv
from apps.harness.detrend import detrend_linear
from apps.harness.recalibrators import (
    MOS_PLUGIN,
    MOS_T,
    NGR_BOOTSTRAP,
    NGR_PLUGIN,
    FitOptions,
)
from apps.harness.synthetic import SyntheticSpec, generate_synthetic
from apps.harness.tests.factories import NgrSpecFactory, SyntheticSpecFactory
from apps.mos.regression import fit_mos
from apps.mos.training import TrainingSet


@pytest.fixture()
def mos_data():
    return generate_synthetic(SyntheticSpecFactory(n=40))


@pytest.fixture()
def options():
    return FitOptions(seed=0, bootstrap_k=5)


class TestCvPlan:
    def test_unknown_mode(self):
        with pytest.raises(ParameterDomainError, match="mode"):
            CvPlan("k-fold", MOS_T)  # act

    def test_unknown_recalibrator(self):
        with pytest.raises(ParameterDomainError, match="unknown recalibrator"):
            CvPlan(ROLLING, "ngr-crps", window=10)  # act

    @pytest.mark.parametrize("recalibrator, window", [(MOS_T, 2), (NGR_PLUGIN, 3), (MOS_T, None)])
    def test_window_below_minimum(self, recalibrator, window):
        with pytest.raises(ParameterDomainError, match="rolling window"):
            CvPlan(ROLLING, recalibrator, window=window)  # act

    def test_leave_one_out_ignores_window(self):
        assert CvPlan(LEAVE_ONE_OUT, NGR_PLUGIN).window is None

    def test_bootstrap_replicates(self):
        with pytest.raises(ParameterDomainError, match="K >= 1"):
            CvPlan(LEAVE_ONE_OUT, NGR_BOOTSTRAP, k=0)  # act

    def test_rolling_folds_are_causal(self):
        folds = CvPlan(ROLLING, MOS_T, window=5).folds(12)

        assert [index for index, _ in folds] == list(range(5, 12))
        for index, training in folds:
            np.testing.assert_array_equal(training, np.arange(index - 5, index))

    def test_leave_one_out_folds(self):
        folds = CvPlan(LEAVE_ONE_OUT, MOS_T).folds(20)

        assert len(folds) == 20
        for index, training in folds:
            assert len(training) == 19
            assert index not in training


class TestRunCv:
    def test_minimal_rolling_run(self, mos_data, options):
        data = mos_data.take(range(26))

        run = run_cv(data, CvPlan(ROLLING, MOS_T, window=25), options)

        assert len(run) == 1
        assert run.folds[0].index == 25
        assert run.folds[0].training == tuple(range(25))

    def test_leave_one_out_on_twenty(self, mos_data, options):
        run = run_cv(mos_data.take(range(20)), CvPlan(LEAVE_ONE_OUT, MOS_T), options)

        assert run.indices == tuple(range(20))
        for fold in run:
            assert len(fold.training) == 19
            assert fold.index not in fold.training

    def test_observations_never_in_training(self, mos_data, options):
        run = run_cv(mos_data, CvPlan(ROLLING, MOS_PLUGIN, window=10), options)

        for fold in run:
            assert fold.y == mos_data.y[fold.index]
            assert fold.index not in fold.training
            assert max(fold.training) < fold.index

    def test_too_little_data(self, mos_data, options):
        with pytest.raises(InsufficientDataError, match="at least 41"):
            run_cv(mos_data, CvPlan(ROLLING, MOS_T, window=40), options)  # act

    def test_plugin_and_t_share_locations(self, mos_data, options):
        plugin = run_cv(mos_data, CvPlan(ROLLING, MOS_PLUGIN, window=15), options)
        student = run_cv(mos_data, CvPlan(ROLLING, MOS_T, window=15), options)

        assert plugin.indices == student.indices
        for normal, t in zip(plugin, student):
            assert t.forecast.mu == normal.forecast.mu
            assert t.forecast.sigma2 > normal.forecast.sigma2

    def test_fold_failure_is_recorded(self, options, caplog):
        m = [1.0, 1.0, 1.0, 2.0, 0.5, 3.0, 1.5, 2.5]
        data = TrainingSet(m, np.ones(8), [1.1, 0.9, 1.3, 2.2, 0.2, 3.1, 1.4, 2.9])

        run = run_cv(data, CvPlan(ROLLING, MOS_T, window=3), options)

        assert [failure.index for failure in run.failures] == [3]
        assert "DegenerateDesignError" in run.failures[0].error
        assert run.indices == (4, 5, 6, 7)
        assert "fold 3 skipped" in caplog.text

    def test_bootstrap_seed_follows_fold_index(self, options):
        data = generate_synthetic(NgrSpecFactory(n=14, seed=5))
        plan = CvPlan(ROLLING, NGR_BOOTSTRAP, window=12, base_seed=99, k=3)

        run = run_cv(data, plan, options)

        train = data.take(range(1, 13))
        ensemble = bootstrap_fit(train, 3, derive_seed(99, 13), opts=options.optimizer)
        expected = bootstrap_predict(ensemble, data.m[13], data.v[13])
        assert run.folds[-1].index == 13
        assert run.folds[-1].forecast == expected

    def test_detrending_fits_training_fold_only(self, options):
        base = generate_synthetic(SyntheticSpec("mos", 0.5, 1.0, 0.4, n=30, seed=3))
        t = base.t.astype(float)
        data = base.replace(m=base.m + 0.2 * t, y=base.y + 0.3 * t)

        run = run_cv(data, CvPlan(ROLLING, MOS_PLUGIN, window=20, detrend=True), options)

        fold = run.folds[4]
        train = data.take(fold.training)
        m_resid, m_trend = detrend_linear(train.t, train.m)
        y_resid, y_trend = detrend_linear(train.t, train.y)
        fit = fit_mos(train.replace(m=m_resid, y=y_resid))
        t_star = data.t[fold.index]
        expected = fit.location(data.m[fold.index] - m_trend(t_star)) + y_trend(t_star)
        assert fold.forecast.mu == pytest.approx(expected, abs=1e-12)
        assert fold.forecast.sigma2 == pytest.approx(fit.c2_hat, rel=1e-12)

    def test_repeatable(self, options):
        data = generate_synthetic(NgrSpecFactory(n=12, seed=8))
        plan = CvPlan(ROLLING, NGR_BOOTSTRAP, window=10, base_seed=4, k=4)

        first = run_cv(data, plan, options)
        second = run_cv(data, plan, options)

        assert [f.record for f in first] == [f.record for f in second]

    def test_parallel_matches_serial(self, options):
        data = generate_synthetic(NgrSpecFactory(n=16, seed=9))
        plan = CvPlan(ROLLING, NGR_BOOTSTRAP, window=12, base_seed=4, k=4)

        serial = run_cv(data, plan, options, workers=1)
        parallel = run_cv(data, plan, options, workers=2)

        assert [f.record for f in serial] == [f.record for f in parallel]
        assert [f.forecast for f in serial] == [f.forecast for f in parallel]

    def test_workers_validated(self, mos_data, options):
        with pytest.raises(ParameterDomainError, match="worker"):
            run_cv(mos_data, CvPlan(ROLLING, MOS_T, window=10), options, workers=0)  # act

    def test_options_default_to_settings(self, mos_data, settings):
        settings.RECAL_WORKERS = 1

        run = run_cv(mos_data, CvPlan(ROLLING, MOS_T, window=30))

        assert len(run) == 10
