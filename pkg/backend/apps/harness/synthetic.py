"""Synthetic training data from the MOS and NGR generating models."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import ParameterDomainError
from apps.core.seeding import stream
from apps.mos.training import TrainingSet

GENERATORS = ("mos", "ngr")


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a synthetic forecast archive.

    ``mos``: y = a + b m + c eps, so ``c`` is the noise standard deviation.
    ``ngr``: y ~ Normal(a + b m, c + d v), so ``c`` and ``d`` act on the variance.
    Ensemble means are Normal(m_mean, m_variance); ensemble variances are
    v_shift + Exponential(v_scale).
    """

    generator: str
    a: float
    b: float
    c: float
    d: float = 0.0
    m_mean: float = 0.0
    m_variance: float = 1.0
    v_shift: float = 0.1
    v_scale: float = 1.0
    n: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ParameterDomainError(
                f"unknown generator {self.generator!r}; expected one of {', '.join(GENERATORS)}"
            )
        values = (self.a, self.b, self.c, self.d, self.m_mean, self.m_variance)
        if not all(math.isfinite(value) for value in values + (self.v_shift, self.v_scale)):
            raise ParameterDomainError("synthetic parameters must be finite")
        if self.n < 0:
            raise ParameterDomainError(f"synthetic size must be non-negative, got {self.n}")
        if self.m_variance < 0.0:
            raise ParameterDomainError("ensemble-mean variance must be non-negative")
        if self.v_shift < 0.0 or self.v_scale < 0.0 or self.v_shift + self.v_scale <= 0.0:
            raise ParameterDomainError("ensemble variances must be positive")
        if self.generator == "mos" and not self.c > 0.0:
            raise ParameterDomainError(f"MOS noise scale c must be positive, got {self.c}")
        if self.generator == "ngr":
            if self.d < 0.0:
                raise ParameterDomainError(f"NGR d must be non-negative, got {self.d}")
            if not self.c + self.d * self.v_shift > 0.0:
                raise ParameterDomainError(
                    "NGR variance c + d*v must be positive for every generated v"
                )

    def echo(self) -> dict[str, object]:
        return {f"synth_{key}": value for key, value in self.__dict__.items()}


def generate_synthetic(spec: SyntheticSpec) -> TrainingSet:
    rng = stream(spec.seed)
    m = rng.normal(spec.m_mean, math.sqrt(spec.m_variance), size=spec.n)
    v = spec.v_shift + rng.exponential(spec.v_scale, size=spec.n)
    eps = rng.standard_normal(spec.n)
    if spec.generator == "mos":
        y = spec.a + spec.b * m + spec.c * eps
    else:
        y = spec.a + spec.b * m + np.sqrt(spec.c + spec.d * v) * eps
    return TrainingSet(m, v, y)
