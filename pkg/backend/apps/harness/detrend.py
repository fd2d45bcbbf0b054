from __future__ import annotations

from typing import NamedTuple

import numpy as np

from apps.core.exceptions import DegenerateDesignError, InsufficientDataError
from apps.mos.training import TrainingSet


class LinearTrend(NamedTuple):
    intercept: float
    slope: float

    def __call__(self, t):
        return self.intercept + self.slope * np.asarray(t, dtype=float)


def detrend_linear(t, x) -> tuple[np.ndarray, LinearTrend]:
    """Remove the least-squares line in ``t`` from ``x``."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if t.size != x.size:
        raise InsufficientDataError(f"detrending needs paired series, got {t.size} and {x.size}")
    if t.size < 3:
        raise InsufficientDataError(f"detrending needs at least 3 points, got {t.size}")
    if np.unique(t).size < 2:
        raise DegenerateDesignError("detrending needs at least 2 distinct time indices")
    dt = t - t.mean()
    slope = float(dt @ (x - x.mean()) / (dt @ dt))
    trend = LinearTrend(float(x.mean() - slope * t.mean()), slope)
    return x - trend(t), trend


def detrend_training(train: TrainingSet) -> tuple[TrainingSet, LinearTrend, LinearTrend]:
    """Detrend ensemble means and observations separately against the time index."""
    m, m_trend = detrend_linear(train.t, train.m)
    y, y_trend = detrend_linear(train.t, train.y)
    return train.replace(m=m, y=y), m_trend, y_trend
