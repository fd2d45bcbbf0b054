import pytest

from apps.core.exceptions import DegenerateVarianceError, EmptyResultError, InputError
from apps.distributions.families import Normal
from apps.harness import crossval
from apps.harness.crossval import ROLLING, CvPlan, FoldResult, run_cv
from apps.harness.recalibrators import MOS_PLUGIN, MOS_T, FitOptions
from apps.harness.summary import (
    INTERQUARTILE,
    OTHER,
    TAIL,
    CvSummary,
    aggregate,
    classify_pit,
    compare,
    run_paired_cv,
    tail_breakdown,
)
from apps.harness.synthetic import generate_synthetic
from apps.harness.tests.factories import SyntheticSpecFactory
from apps.verification.reliability import pit_histogram
from apps.verification.scores import VerificationRecord


def fold(index, pit=0.5, ignorance=1.0, crps=1.0, y=0.0):
    return FoldResult(
        index, Normal(0.0, 1.0), y, VerificationRecord(pit, ignorance, crps), (index - 1,)
    )


def summary(mean_ignorance, mean_crps, fold_count=10):
    return CvSummary(
        mean_ignorance, mean_crps, pit_histogram([0.5] * fold_count), {}, fold_count, 0
    )


class TestAggregate:
    def test_single_fold(self):
        only = fold(3, pit=0.3, ignorance=1.7, crps=0.4)

        result = aggregate([only])

        assert result.mean_ignorance == 1.7
        assert result.mean_crps == 0.4
        assert result.fold_count == 1
        assert result.failure_count == 0
        assert sum(result.pit_histogram.counts) == 1

    def test_means(self):
        result = aggregate([fold(1, crps=1.0, ignorance=2.0), fold(2, crps=3.0, ignorance=3.0)])

        assert result.mean_crps == 2.0
        assert result.mean_ignorance == 2.5

    def test_default_coverage_levels(self):
        result = aggregate([fold(1), fold(2, y=5.0)])

        assert result.coverage == {0.5: 0.5, 0.9: 0.5}

    def test_no_successful_fold(self):
        with pytest.raises(EmptyResultError, match="2 failed"):
            aggregate([], failure_count=2)  # act

    def test_run_counts_failures(self):
        data = generate_synthetic(SyntheticSpecFactory(n=30))
        run = run_cv(data, CvPlan(ROLLING, MOS_T, window=20), FitOptions())

        result = aggregate(run)

        assert result.fold_count == 10
        assert result.failure_count == 0
        assert sum(result.pit_histogram.counts) == result.fold_count

    def test_flat_record(self):
        record = aggregate([fold(1)], levels=[0.9]).as_record()

        assert record == {
            "mean_ignorance": 1.0,
            "mean_crps": 1.0,
            "fold_count": 1,
            "failure_count": 0,
            "coverage_0.9": 1.0,
        }


class TestCompare:
    def test_candidate_better(self):
        result = compare(summary(2.0, 2.0), summary(1.5, 1.0))

        assert result.ignorance_difference == 0.5
        assert result.crpss == 0.5

    def test_unpaired_summaries(self):
        with pytest.raises(InputError, match="different fold counts"):
            compare(summary(2.0, 2.0, 10), summary(1.5, 1.0, 9))  # act


class TestRunPairedCv:
    def test_plugin_versus_t(self):
        data = generate_synthetic(SyntheticSpecFactory(n=60, c=1.0))
        plan = CvPlan(ROLLING, MOS_PLUGIN, window=10)

        paired = run_paired_cv(data, plan, MOS_PLUGIN, MOS_T, FitOptions())

        assert paired.reference.indices == paired.candidate.indices
        assert paired.reference.plan.recalibrator == MOS_PLUGIN
        assert paired.candidate.plan.recalibrator == MOS_T
        assert paired.comparison().ignorance_difference == pytest.approx(
            aggregate(paired.reference).mean_ignorance
            - aggregate(paired.candidate).mean_ignorance
        )

    def test_fold_failing_in_one_arm_is_dropped_from_both(self, monkeypatch):
        data = generate_synthetic(SyntheticSpecFactory(n=15))
        fit = crossval.fit_recalibrator

        def flaky(name, train, options):
            if name == MOS_T and train.m[0] == data.m[0]:
                raise DegenerateVarianceError("forced")
            return fit(name, train, options)

        monkeypatch.setattr(crossval, "fit_recalibrator", flaky)

        paired = run_paired_cv(
            data, CvPlan(ROLLING, MOS_PLUGIN, window=10), MOS_PLUGIN, MOS_T, FitOptions()
        )

        assert paired.reference.indices == (11, 12, 13, 14)
        assert paired.candidate.indices == (11, 12, 13, 14)
        assert [f.index for f in paired.reference.failures] == [10]
        assert aggregate(paired.reference).failure_count == 1


class TestTailBreakdown:
    @pytest.mark.parametrize(
        "pit, expected",
        [(0.005, TAIL), (0.995, TAIL), (0.25, INTERQUARTILE), (0.6, INTERQUARTILE), (0.1, OTHER)],
    )
    def test_classify(self, pit, expected):
        assert classify_pit(pit) == expected

    def test_breakdown(self):
        reference = [fold(1, 0.001, 6.0), fold(2, 0.5, 1.0), fold(3, 0.999, 8.0)]
        candidate = [fold(1, 0.01, 4.0), fold(2, 0.5, 1.2), fold(3, 0.98, 5.0)]

        result = tail_breakdown(reference, candidate)

        assert set(result) == {TAIL, INTERQUARTILE}
        assert result[TAIL].count == 2
        assert result[TAIL].reference_ignorance == 7.0
        assert result[TAIL].candidate_ignorance == 4.5
        assert result[TAIL].improvement == 2.5
        assert result[INTERQUARTILE].improvement == pytest.approx(-0.2)

    def test_unpaired(self):
        with pytest.raises(InputError, match="identical indices"):
            tail_breakdown([fold(1)], [fold(2)])  # act
