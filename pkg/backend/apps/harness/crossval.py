"""Out-of-sample evaluation: rolling-window and leave-one-out cross-validation.

Fold ``i`` forecasts case ``i``. Rolling folds train on the ``window`` cases
immediately before it; leave-one-out folds train on every other case. Each
fold draws its bootstrap seed from ``(base_seed, i)``, so folds can run in any
order or in parallel and give the same result.
"""
from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, replace

import numpy as np
from django.conf import settings
from pathos.multiprocessing import ProcessPool

from apps.core.exceptions import InsufficientDataError, ParameterDomainError, RecalError
from apps.core.seeding import derive_seed
from apps.distributions.families import PredictiveDist
from apps.harness.detrend import detrend_training
from apps.harness.recalibrators import FitOptions, fit_recalibrator, get_recalibrator
from apps.mos.training import TrainingSet
from apps.verification.scores import VerificationRecord, verify

logger = logging.getLogger(__name__)

ROLLING = "rolling"
LEAVE_ONE_OUT = "loo"
MODES = (ROLLING, LEAVE_ONE_OUT)


@dataclass(frozen=True)
class CvPlan:
    """How to cross-validate one recalibrator.

    Fields:
        mode (str): ``rolling`` or ``loo``.
        recalibrator (str): Registered recalibrator name.
        window (int | None): Training window, rolling mode only.
        base_seed (int): Root of the per-fold seeds.
        k (int): Bootstrap replicates, ngr-bootstrap only.
        detrend (bool): Remove a linear time trend fitted on each training fold.
    """

    mode: str
    recalibrator: str
    window: int | None = None
    base_seed: int = 0
    k: int = 50
    detrend: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterDomainError(f"unknown cross-validation mode {self.mode!r}")
        recalibrator = get_recalibrator(self.recalibrator)
        if self.mode == ROLLING:
            if self.window is None or self.window < recalibrator.min_training:
                raise ParameterDomainError(
                    f"{self.recalibrator} needs a rolling window of at least "
                    f"{recalibrator.min_training}, got {self.window}"
                )
        if self.k < 1:
            raise ParameterDomainError(f"bootstrap needs K >= 1 replicates, got {self.k}")

    @property
    def min_training(self) -> int:
        return get_recalibrator(self.recalibrator).min_training

    def folds(self, n: int) -> list[tuple[int, np.ndarray]]:
        """(forecast index, training indices) for every fold on ``n`` cases."""
        if self.mode == ROLLING:
            if n < self.window + 1:
                raise InsufficientDataError(
                    f"rolling window {self.window} needs at least {self.window + 1} cases, got {n}"
                )
            return [(i, np.arange(i - self.window, i)) for i in range(self.window, n)]
        if n < self.min_training + 1:
            raise InsufficientDataError(
                f"leave-one-out with {self.recalibrator} needs at least "
                f"{self.min_training + 1} cases, got {n}"
            )
        everything = np.arange(n)
        return [(i, np.delete(everything, i)) for i in range(n)]

    def echo(self) -> dict[str, object]:
        return {
            "mode": self.mode,
            "recalibrator": self.recalibrator,
            "window": self.window,
            "base_seed": self.base_seed,
            "bootstrap_k": self.k,
            "detrend": self.detrend,
        }


@dataclass(frozen=True)
class FoldResult:
    index: int
    forecast: PredictiveDist
    y: float
    record: VerificationRecord
    training: tuple[int, ...]


@dataclass(frozen=True)
class FoldFailure:
    index: int
    error: str


@dataclass(frozen=True)
class CvRun:
    plan: CvPlan
    folds: tuple[FoldResult, ...]
    failures: tuple[FoldFailure, ...]

    def __iter__(self) -> Iterator[FoldResult]:
        return iter(self.folds)

    def __len__(self) -> int:
        return len(self.folds)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(fold.index for fold in self.folds)

    def restrict(self, indices) -> CvRun:
        """Keep only the folds forecasting ``indices``; the rest count as failures."""
        keep = set(indices)
        dropped = tuple(
            FoldFailure(fold.index, "dropped to match a paired run")
            for fold in self.folds
            if fold.index not in keep
        )
        failures = tuple(sorted(self.failures + dropped, key=lambda failure: failure.index))
        return replace(
            self, folds=tuple(f for f in self.folds if f.index in keep), failures=failures
        )


def _run_fold(
    data: TrainingSet, index: int, training: np.ndarray, plan: CvPlan, options: FitOptions
) -> FoldResult | FoldFailure:
    train = data.take(training)
    m_star, v_star, y = float(data.m[index]), float(data.v[index]), float(data.y[index])
    offset = 0.0
    try:
        if plan.detrend:
            train, m_trend, y_trend = detrend_training(train)
            m_star -= float(m_trend(data.t[index]))
            offset = float(y_trend(data.t[index]))
        fold_options = replace(options, seed=derive_seed(plan.base_seed, index))
        fitted = fit_recalibrator(plan.recalibrator, train, fold_options)
        forecast = fitted.predict(m_star, v_star)
        if plan.detrend:
            forecast = forecast.shift(offset)
        record = verify(forecast, y)
    except RecalError as exc:
        logger.warning("fold %d skipped: %s", index, exc)
        return FoldFailure(index, f"{type(exc).__name__}: {exc}")
    return FoldResult(index, forecast, y, record, tuple(int(i) for i in training))


def _map(function, jobs: Sequence, workers: int) -> list:
    if workers == 1:
        return [function(job) for job in jobs]
    pool = ProcessPool(workers)
    try:
        pool.restart()
    except AssertionError:
        pass
    try:
        return pool.map(function, jobs)
    finally:
        pool.close()
        pool.join()


def run_cv(
    data: TrainingSet,
    plan: CvPlan,
    options: FitOptions | None = None,
    workers: int | None = None,
) -> CvRun:
    """Evaluate ``plan`` on ``data``; results are in forecast-index order."""
    options = replace(options or FitOptions.from_settings(), bootstrap_k=plan.k)
    workers = settings.RECAL_WORKERS if workers is None else workers
    if workers < 1:
        raise ParameterDomainError(f"worker count must be at least 1, got {workers}")
    jobs = plan.folds(data.n)
    logger.info(
        "cross-validating %s (%s) over %d folds with %d worker(s)",
        plan.recalibrator,
        plan.mode,
        len(jobs),
        workers,
    )
    outcomes = _map(lambda job: _run_fold(data, job[0], job[1], plan, options), jobs, workers)
    folds = tuple(outcome for outcome in outcomes if isinstance(outcome, FoldResult))
    failures = tuple(outcome for outcome in outcomes if isinstance(outcome, FoldFailure))
    if failures:
        logger.warning("%d of %d folds failed", len(failures), len(jobs))
    return CvRun(plan, folds, failures)


def run_matched_cv(
    data: TrainingSet,
    plan: CvPlan,
    recalibrators: Sequence[str],
    options: FitOptions | None = None,
    workers: int | None = None,
) -> dict[str, CvRun]:
    """Run several recalibrators on the same folds, keeping only folds all of them scored."""
    if not recalibrators:
        raise ParameterDomainError("matched cross-validation needs at least one recalibrator")
    runs = {
        name: run_cv(data, replace(plan, recalibrator=name), options, workers)
        for name in recalibrators
    }
    common = set.intersection(*(set(run.indices) for run in runs.values()))
    return {name: run.restrict(common) for name, run in runs.items()}
