"""Aggregate scores over folds and compare recalibrators fold by fold."""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from django.conf import settings

from apps.core.exceptions import EmptyResultError, InputError
from apps.harness.crossval import CvPlan, CvRun, FoldResult, run_matched_cv
from apps.harness.recalibrators import FitOptions
from apps.mos.training import TrainingSet
from apps.verification.reliability import PitHistogram, interval_coverage, pit_histogram
from apps.verification.scores import crpss

TAIL = "tail"
INTERQUARTILE = "interquartile"
OTHER = "other"


@dataclass(frozen=True)
class CvSummary:
    """Fold-averaged scores.

    Fields:
        mean_ignorance (float): Mean Ignorance in bits.
        mean_crps (float): Mean CRPS.
        pit_histogram (PitHistogram): 20-bin PIT counts.
        coverage (dict[float, float]): Central-interval coverage by level.
        fold_count (int): Folds that produced a forecast.
        failure_count (int): Folds skipped because fitting or scoring failed.
    """

    mean_ignorance: float
    mean_crps: float
    pit_histogram: PitHistogram
    coverage: dict[float, float]
    fold_count: int
    failure_count: int

    def as_record(self) -> dict[str, object]:
        record: dict[str, object] = {
            "mean_ignorance": self.mean_ignorance,
            "mean_crps": self.mean_crps,
            "fold_count": self.fold_count,
            "failure_count": self.failure_count,
        }
        for level, value in self.coverage.items():
            record[f"coverage_{level:g}"] = value
        return record


def aggregate(
    results: CvRun | Sequence[FoldResult],
    failure_count: int | None = None,
    levels: Sequence[float] | None = None,
) -> CvSummary:
    """Summarise folds; sums run in fold order so results are bit-reproducible."""
    if isinstance(results, CvRun):
        folds = results.folds
        failure_count = len(results.failures) if failure_count is None else failure_count
    else:
        folds = tuple(results)
    failure_count = failure_count or 0
    if not folds:
        raise EmptyResultError(
            f"no fold produced a forecast ({failure_count} failed); nothing to aggregate"
        )
    levels = settings.RECAL_COVERAGE_LEVELS if levels is None else levels
    records = [fold.record for fold in folds]
    forecasts = [fold.forecast for fold in folds]
    ys = [fold.y for fold in folds]
    return CvSummary(
        mean_ignorance=math.fsum(r.ignorance_bits for r in records) / len(records),
        mean_crps=math.fsum(r.crps for r in records) / len(records),
        pit_histogram=pit_histogram([r.pit for r in records]),
        coverage={float(level): interval_coverage(forecasts, ys, level) for level in levels},
        fold_count=len(folds),
        failure_count=failure_count,
    )


@dataclass(frozen=True)
class Comparison:
    """Skill of a candidate over a reference on the same folds.

    ``ignorance_difference`` is reference minus candidate, so positive favours
    the candidate, as does a positive ``crpss``.
    """

    ignorance_difference: float
    crpss: float


def compare(reference: CvSummary, candidate: CvSummary) -> Comparison:
    if reference.fold_count != candidate.fold_count:
        raise InputError(
            f"summaries cover different fold counts ({reference.fold_count} and "
            f"{candidate.fold_count}); compare paired runs only"
        )
    return Comparison(
        reference.mean_ignorance - candidate.mean_ignorance,
        crpss(reference.mean_crps, candidate.mean_crps),
    )


@dataclass(frozen=True)
class PairedRun:
    reference: CvRun
    candidate: CvRun

    def summaries(self, levels: Sequence[float] | None = None) -> tuple[CvSummary, CvSummary]:
        return aggregate(self.reference, levels=levels), aggregate(self.candidate, levels=levels)

    def comparison(self) -> Comparison:
        return compare(*self.summaries())


def run_paired_cv(
    data: TrainingSet,
    plan: CvPlan,
    reference: str,
    candidate: str,
    options: FitOptions | None = None,
    workers: int | None = None,
) -> PairedRun:
    """Cross-validate two recalibrators on identical folds.

    A fold that failed in either arm is dropped from both.
    """
    runs = run_matched_cv(data, plan, [reference, candidate], options, workers)
    return PairedRun(runs[reference], runs[candidate])


@dataclass(frozen=True)
class TailClass:
    count: int
    reference_ignorance: float
    candidate_ignorance: float

    @property
    def improvement(self) -> float:
        return self.reference_ignorance - self.candidate_ignorance


def classify_pit(pit: float) -> str:
    """Where an observation fell in the reference forecast."""
    if pit < 0.01 or pit > 0.99:
        return TAIL
    if 0.25 <= pit <= 0.75:
        return INTERQUARTILE
    return OTHER


def tail_breakdown(
    reference: Sequence[FoldResult], candidate: Sequence[FoldResult]
) -> dict[str, TailClass]:
    """Mean Ignorance per arm, split by the reference forecast's PIT.

    Classes: outside the reference 1-99% interval, inside its interquartile
    range, and everything else. Empty classes are omitted.
    """
    if [f.index for f in reference] != [f.index for f in candidate]:
        raise InputError("tail breakdown needs paired folds with identical indices")
    groups: dict[str, list[tuple[float, float]]] = {}
    for ref, cand in zip(reference, candidate):
        groups.setdefault(classify_pit(ref.record.pit), []).append(
            (ref.record.ignorance_bits, cand.record.ignorance_bits)
        )
    return {
        name: TailClass(
            len(pairs),
            math.fsum(r for r, _ in pairs) / len(pairs),
            math.fsum(c for _, c in pairs) / len(pairs),
        )
        for name, pairs in groups.items()
    }
