"""Training data shared by every recalibration framework."""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import InputError


@dataclass(frozen=True)
class TrainingRecord:
    """One forecast case.

    Fields:
        m (float): Ensemble mean.
        v (float): Ensemble variance, >= 0.
        y (float): Verifying observation.
    """

    m: float
    v: float
    y: float


def _frozen(values, name: str, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype).reshape(-1)
    if dtype is float and not np.all(np.isfinite(array)):
        raise InputError(f"{name} contains non-finite values")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Ordered training cases (m_t, v_t, y_t) with integer time indices.

    Fields:
        m (ndarray): Ensemble means.
        v (ndarray): Ensemble variances, non-negative.
        y (ndarray): Observations.
        t (ndarray): Integer time index per case; defaults to 0..n-1. Used by
            linear detrending only.
    """

    m: np.ndarray
    v: np.ndarray
    y: np.ndarray
    t: np.ndarray | None = None

    def __post_init__(self):
        m = _frozen(self.m, "ensemble means")
        v = _frozen(self.v, "ensemble variances")
        y = _frozen(self.y, "observations")
        t = np.arange(m.size) if self.t is None else self.t
        t = _frozen(t, "time index", dtype=np.int64)
        if not (m.size == v.size == y.size == t.size):
            raise InputError(
                f"training columns differ in length: m={m.size} v={v.size} y={y.size} t={t.size}"
            )
        if np.any(v < 0.0):
            raise InputError("ensemble variances must be non-negative")
        for name, array in (("m", m), ("v", v), ("y", y), ("t", t)):
            object.__setattr__(self, name, array)

    @classmethod
    def from_records(
        cls, records: Iterable[TrainingRecord | Sequence[float]], t=None
    ) -> TrainingSet:
        rows = [
            (r.m, r.v, r.y) if isinstance(r, TrainingRecord) else tuple(r) for r in records
        ]
        if not rows:
            return cls(np.empty(0), np.empty(0), np.empty(0), t)
        m, v, y = zip(*rows)
        return cls(m, v, y, t)

    @property
    def n(self) -> int:
        return int(self.m.size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrainingSet):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("m", "v", "y", "t")
        )

    __hash__ = None

    @property
    def records(self) -> list[TrainingRecord]:
        return [TrainingRecord(float(m), float(v), float(y)) for m, v, y in zip(self.m, self.v, self.y)]

    @property
    def distinct_means(self) -> int:
        return int(np.unique(self.m).size)

    def take(self, indices) -> TrainingSet:
        """Return the cases at ``indices`` (repeats allowed), keeping their times."""
        indices = np.asarray(indices, dtype=np.int64)
        return TrainingSet(self.m[indices], self.v[indices], self.y[indices], self.t[indices])

    def replace(self, *, m=None, y=None) -> TrainingSet:
        return TrainingSet(
            self.m if m is None else m,
            self.v,
            self.y if y is None else y,
            self.t,
        )
