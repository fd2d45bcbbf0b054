"""Non-homogeneous Gaussian Regression model y ~ N(a + b m, c + d v)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import DegenerateVarianceError, ParameterDomainError
from apps.distributions.families import Normal
from apps.mos.training import TrainingSet

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class NgrParams:
    """NGR parameters.

    Fields:
        a (float): Intercept of the predictive mean.
        b (float): Slope on the ensemble mean.
        c (float): Variance offset (squared units).
        d (float): Slope on the ensemble variance. Optimised as d = delta**2,
            so never negative.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterDomainError(f"NGR parameter {name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.d < 0.0:
            raise ParameterDomainError(f"NGR variance slope d must be non-negative, got {self.d}")

    @classmethod
    def from_delta(cls, a: float, b: float, c: float, delta: float) -> NgrParams:
        return cls(a, b, c, delta * delta)

    def location(self, m):
        return self.a + self.b * m

    def variance(self, v):
        return self.c + self.d * v

    def predictive(self, m_star: float, v_star: float) -> Normal:
        variance = self.variance(v_star)
        if not variance > 0.0:
            raise DegenerateVarianceError(
                f"NGR predictive variance c + d*v = {variance} is not positive"
            )
        return Normal(self.location(m_star), variance)


def _terms(params: NgrParams, train: TrainingSet) -> tuple[np.ndarray, np.ndarray]:
    variance = params.variance(train.v)
    if np.any(variance <= 0.0):
        raise ParameterDomainError("c + d*v must be positive for every training case")
    residuals = train.y - params.location(train.m)
    return variance, residuals


def ngr_log_likelihood(params: NgrParams, train: TrainingSet) -> float:
    """Proportional log-likelihood -sum[log(c + d v) + r^2 / (c + d v)].

    Constants and the factor 1/2 of the Gaussian log-density are dropped; the
    maximiser is the same as for :func:`ngr_exact_log_likelihood`, and
    ``exact = proportional / 2 - n log(2 pi) / 2``.
    """
    variance, residuals = _terms(params, train)
    return -float(np.sum(np.log(variance) + residuals**2 / variance))


def ngr_exact_log_likelihood(params: NgrParams, train: TrainingSet) -> float:
    variance, residuals = _terms(params, train)
    return -0.5 * float(np.sum(LOG_2PI + np.log(variance) + residuals**2 / variance))
