"""Predictive bootstrap for NGR.

Resample the training cases with replacement, refit NGR on each resample and
average the K plug-in Normals into an equally weighted Normal mixture.
Replicate k draws from the stream derived from ``(base_seed, k)`` only, so a
replicate never depends on K or on its siblings.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from apps.core.exceptions import (
    BootstrapFailureError,
    DegenerateDesignError,
    DegenerateVarianceError,
    InsufficientDataError,
    ParameterDomainError,
    RecalError,
)
from apps.core.seeding import stream
from apps.distributions.families import NormalMixture
from apps.mos.training import TrainingSet
from apps.ngr.fitting import MIN_TRAINING_SIZE, OptimizerSettings, fit_ngr
from apps.ngr.likelihood import NgrParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BootstrapSettings:
    k: int = 50
    redraw_cap_factor: int = 100

    @classmethod
    def from_settings(cls) -> BootstrapSettings:
        conf = settings.RECAL_BOOTSTRAP
        return cls(k=conf["K"], redraw_cap_factor=conf["REDRAW_CAP_FACTOR"])


@dataclass(frozen=True)
class BootstrapEnsemble:
    """Bootstrap NGR parameter estimates.

    Fields:
        replicates (tuple[NgrParams, ...]): One estimate per replicate, K >= 1.
        failed_draws (int): Resamples discarded because they were degenerate or
            their fit did not converge.
        base_seed (int): Seed the replicate streams were derived from.
    """

    replicates: tuple[NgrParams, ...]
    failed_draws: int
    base_seed: int

    @property
    def k(self) -> int:
        return len(self.replicates)


def resample_indices(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, n, size=n)


def _fit_replicate(
    train: TrainingSet, base_seed: int, k: int, opts: OptimizerSettings, max_draws: int
) -> tuple[NgrParams | None, int]:
    rng = stream(base_seed, k)
    for draw in range(1, max_draws + 1):
        resample = train.take(resample_indices(rng, train.n))
        if resample.distinct_means < 2:
            logger.debug("replicate %d draw %d: degenerate resample", k, draw)
            continue
        try:
            fit = fit_ngr(resample, opts)
        except RecalError as exc:
            logger.debug("replicate %d draw %d: %s", k, draw, exc)
            continue
        if fit.converged:
            return fit.params, draw
        logger.debug("replicate %d draw %d: fit did not converge", k, draw)
    return None, max_draws


def bootstrap_fit(
    train: TrainingSet,
    k: int,
    base_seed: int,
    opts: OptimizerSettings | None = None,
    redraw_cap_factor: int | None = None,
) -> BootstrapEnsemble:
    """Fit K NGR replicates on case resamples of ``train``.

    Degenerate or non-converged resamples are redrawn from the same replicate
    stream; at most ``redraw_cap_factor * K`` resamples are drawn in total.
    """
    if k < 1:
        raise ParameterDomainError(f"bootstrap needs K >= 1 replicates, got {k}")
    if train.n < MIN_TRAINING_SIZE:
        raise InsufficientDataError(
            f"NGR needs at least {MIN_TRAINING_SIZE} training cases, got {train.n}"
        )
    if train.distinct_means < 2:
        raise DegenerateDesignError("all training ensemble means are identical")
    opts = opts or OptimizerSettings.from_settings()
    if redraw_cap_factor is None:
        redraw_cap_factor = BootstrapSettings.from_settings().redraw_cap_factor
    cap = redraw_cap_factor * k

    replicates = []
    total_draws = 0
    for index in range(k):
        params, draws = _fit_replicate(train, base_seed, index, opts, cap - total_draws)
        total_draws += draws
        if params is None:
            raise BootstrapFailureError(
                f"bootstrap drew {total_draws} resamples (cap {cap}) without completing "
                f"replicate {index}; training data are too small or degenerate"
            )
        replicates.append(params)

    failed = total_draws - k
    if failed:
        logger.warning("bootstrap discarded %d of %d resamples", failed, total_draws)
    return BootstrapEnsemble(tuple(replicates), failed, int(base_seed))


def bootstrap_predict(ens: BootstrapEnsemble, m_star: float, v_star: float) -> NormalMixture:
    """Equal-weight mixture of the replicates' plug-in Normals."""
    means = np.empty(ens.k)
    variances = np.empty(ens.k)
    for index, params in enumerate(ens.replicates):
        variances[index] = params.variance(v_star)
        if not variances[index] > 0.0:
            raise DegenerateVarianceError(
                f"bootstrap replicate {index} has non-positive predictive variance "
                f"{variances[index]}"
            )
        means[index] = params.location(m_star)
    return NormalMixture.equal_weights(means, variances)
