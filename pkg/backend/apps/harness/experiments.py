"""Monte-Carlo experiments built from the harness pieces."""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace

from apps.core.exceptions import ParameterDomainError, RecalError
from apps.core.seeding import derive_seed
from apps.harness.crossval import ROLLING, CvPlan, FoldResult, run_matched_cv
from apps.harness.recalibrators import FitOptions, fit_recalibrator, get_recalibrator
from apps.harness.summary import aggregate
from apps.harness.synthetic import SyntheticSpec, generate_synthetic
from apps.mos.training import TrainingSet
from apps.verification.scores import verify

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreshTrainingResult:
    """Per-recalibrator folds of a fresh-training experiment, in case order."""

    folds: dict[str, tuple[FoldResult, ...]]
    failure_count: int


def fresh_training_experiment(
    spec: SyntheticSpec,
    training_size: int,
    cases: int,
    recalibrators: Sequence[str],
    base_seed: int,
    options: FitOptions | None = None,
) -> FreshTrainingResult:
    """Score each recalibrator on ``cases`` independent problems.

    Every case draws ``training_size`` training pairs plus one held-out pair
    from ``spec`` with seed ``(base_seed, case)``. A case on which any
    recalibrator fails is dropped for all of them.
    """
    if cases < 1:
        raise ParameterDomainError(f"experiment needs at least one case, got {cases}")
    for name in recalibrators:
        needed = get_recalibrator(name).min_training
        if training_size < needed:
            raise ParameterDomainError(
                f"{name} needs training size of at least {needed}, got {training_size}"
            )
    options = options or FitOptions.from_settings()
    training = tuple(range(training_size))
    folds: dict[str, list[FoldResult]] = {name: [] for name in recalibrators}
    failures = 0
    for case in range(cases):
        seed = derive_seed(base_seed, case)
        data = generate_synthetic(replace(spec, n=training_size + 1, seed=seed))
        train = data.take(training)
        m_star, v_star, y = (float(data.m[-1]), float(data.v[-1]), float(data.y[-1]))
        try:
            outcomes = []
            for name in recalibrators:
                fitted = fit_recalibrator(name, train, replace(options, seed=seed))
                forecast = fitted.predict(m_star, v_star)
                outcomes.append(FoldResult(case, forecast, y, verify(forecast, y), training))
        except RecalError as exc:
            logger.warning("case %d skipped: %s", case, exc)
            failures += 1
            continue
        for name, outcome in zip(recalibrators, outcomes):
            folds[name].append(outcome)
    return FreshTrainingResult({name: tuple(f) for name, f in folds.items()}, failures)


@dataclass(frozen=True)
class SweepRow:
    window: int
    recalibrator: str
    mean_ignorance: float
    mean_crps: float
    fold_count: int
    failure_count: int


def training_size_sweep(
    data: TrainingSet,
    windows: Sequence[int],
    recalibrators: Sequence[str],
    base_seed: int,
    k: int = 50,
    detrend: bool = False,
    options: FitOptions | None = None,
    workers: int | None = None,
) -> list[SweepRow]:
    """Rolling-window scores as a function of training size.

    At each window size all recalibrators are scored on the same folds.
    """
    if not recalibrators:
        raise ParameterDomainError("sweep needs at least one recalibrator")
    rows = []
    for window in windows:
        plan = CvPlan(ROLLING, recalibrators[0], window, base_seed, k, detrend)
        runs = run_matched_cv(data, plan, recalibrators, options, workers)
        for name in recalibrators:
            summary = aggregate(runs[name], levels=())
            rows.append(
                SweepRow(
                    window,
                    name,
                    summary.mean_ignorance,
                    summary.mean_crps,
                    summary.fold_count,
                    summary.failure_count,
                )
            )
        logger.info("sweep window %d done", window)
    return rows
