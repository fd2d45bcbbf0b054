"""Model Output Statistics: Normal linear regression of observations on the ensemble mean.

The predictive distribution is available in two forms: the plug-in Normal that
treats the fitted parameters as known, and the t-distribution with inflated
variance that carries their estimation uncertainty.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import (
    DegenerateDesignError,
    DegenerateVarianceError,
    InsufficientDataError,
)
from apps.distributions.families import NonStandardizedT, Normal
from apps.mos.training import TrainingSet

logger = logging.getLogger(__name__)

MIN_TRAINING_SIZE = 3


@dataclass(frozen=True)
class MosFit:
    """Fitted MOS parameters plus the training statistics the t predictive needs.

    Fields:
        a_hat (float): Intercept.
        b_hat (float): Slope on the ensemble mean.
        c2_hat (float): Residual variance, sum of squared residuals over n - 2.
        n (int): Training size.
        m_bar (float): Mean of the training ensemble means.
        ss_m (float): Sum of squared deviations of the training ensemble means.
    """

    a_hat: float
    b_hat: float
    c2_hat: float
    n: int
    m_bar: float
    ss_m: float

    @property
    def degrees_of_freedom(self) -> int:
        return self.n - 2

    def location(self, m_star: float) -> float:
        return self.a_hat + self.b_hat * m_star


def fit_mos(train: TrainingSet) -> MosFit:
    """Closed-form unbiased estimates of intercept, slope and residual variance.

    Covariance and variance share the n - 1 divisor, so it cancels in the slope.
    """
    n = train.n
    if n < MIN_TRAINING_SIZE:
        raise InsufficientDataError(
            f"MOS needs at least {MIN_TRAINING_SIZE} training cases, got {n}"
        )
    if train.distinct_means < 2:
        raise DegenerateDesignError("all training ensemble means are identical")

    m, y = train.m, train.y
    m_bar = float(np.mean(m))
    y_bar = float(np.mean(y))
    dm = m - m_bar
    ss_m = float(dm @ dm)
    s_my = float(dm @ (y - y_bar)) / (n - 1)
    s_m2 = ss_m / (n - 1)
    b_hat = s_my / s_m2
    a_hat = y_bar - b_hat * m_bar
    residuals = y - a_hat - b_hat * m
    c2_hat = float(residuals @ residuals) / (n - 2)
    logger.debug("MOS fit n=%d a=%g b=%g c2=%g", n, a_hat, b_hat, c2_hat)
    return MosFit(a_hat, b_hat, c2_hat, n, m_bar, ss_m)


def _require_variance(fit: MosFit) -> None:
    if not fit.c2_hat > 0.0:
        raise DegenerateVarianceError(
            "MOS residual variance is zero (perfect training fit); predictive is undefined"
        )


def mos_predict_plugin(fit: MosFit, m_star: float) -> Normal:
    _require_variance(fit)
    return Normal(fit.location(m_star), fit.c2_hat)


def inflation_factor(fit: MosFit, m_star: float) -> float:
    """Variance inflation 1 + 1/n + (m* - m_bar)^2 / ss_m."""
    return 1.0 + 1.0 / fit.n + (m_star - fit.m_bar) ** 2 / fit.ss_m


def mos_predict_t(fit: MosFit, m_star: float) -> NonStandardizedT:
    """t_{n-2} predictive with the same location as the plug-in Normal."""
    _require_variance(fit)
    return NonStandardizedT(
        fit.degrees_of_freedom,
        fit.location(m_star),
        fit.c2_hat * inflation_factor(fit, m_star),
    )
