"""Predictive distribution families: Normal, non-standardized t, Normal mixture.

All three are immutable values parametrised by variance (squared scale), so
``NonStandardizedT(18, 0.0, 1.1)`` is the t-distribution with 18 degrees of
freedom, location 0 and *squared* scale 1.1.

Methods accept scalars or numpy arrays and return a float for scalar input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import optimize, special

from apps.core.exceptions import ParameterDomainError

WEIGHT_SUM_TOLERANCE = 1e-12
# Mixture quantiles are searched inside [min mu - 20 max sigma, max mu + 20 max sigma].
MIXTURE_BRACKET_SIGMAS = 20.0
LOG_2PI = math.log(2.0 * math.pi)


def _out(value):
    if np.ndim(value) == 0:
        return float(value)
    return value


def _check_probability(p) -> None:
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise ParameterDomainError(f"quantile level must lie in (0, 1), got {p}")


def _check_count(k: int) -> None:
    if k < 0:
        raise ParameterDomainError(f"sample size must be non-negative, got {k}")


@dataclass(frozen=True)
class Normal:
    """Normal distribution N(mu, sigma2).

    Fields:
        mu (float): Mean, in units of the forecast variable.
        sigma2 (float): Variance. Must be strictly positive.
    """

    mu: float
    sigma2: float

    kind = "normal"

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if not math.isfinite(self.mu):
            raise ParameterDomainError(f"Normal mean must be finite, got {self.mu}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise ParameterDomainError(
                f"Normal variance must be positive and finite, got {self.sigma2}"
            )

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def logpdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return _out(-0.5 * (LOG_2PI + math.log(self.sigma2)) - 0.5 * z * z)

    def pdf(self, x):
        return _out(np.exp(self.logpdf(x)))

    def cdf(self, x):
        return _out(special.ndtr((np.asarray(x, dtype=float) - self.mu) / self.sigma))

    def quantile(self, p):
        _check_probability(p)
        return _out(self.mu + self.sigma * special.ndtri(np.asarray(p, dtype=float)))

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        _check_count(k)
        return rng.normal(self.mu, self.sigma, size=k)

    def mean(self) -> float:
        return self.mu

    def variance(self) -> float:
        return self.sigma2

    def shift(self, delta: float) -> Normal:
        return Normal(self.mu + delta, self.sigma2)


@dataclass(frozen=True)
class NonStandardizedT:
    """Location-scale Student t-distribution t_nu(mu, sigma2).

    Fields:
        nu (float): Degrees of freedom, > 0.
        mu (float): Location.
        sigma2 (float): Squared scale, > 0. The variance is sigma2 * nu / (nu - 2)
            for nu > 2.
    """

    nu: float
    mu: float
    sigma2: float

    kind = "t"

    def __post_init__(self):
        for name in ("nu", "mu", "sigma2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.nu) and self.nu > 0.0):
            raise ParameterDomainError(f"degrees of freedom must be positive, got {self.nu}")
        if not math.isfinite(self.mu):
            raise ParameterDomainError(f"t location must be finite, got {self.mu}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise ParameterDomainError(
                f"t squared scale must be positive and finite, got {self.sigma2}"
            )

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.mu) / self.sigma

    def logpdf(self, x):
        nu = self.nu
        z = self._z(x)
        log_norm = (
            special.gammaln(0.5 * (nu + 1.0))
            - special.gammaln(0.5 * nu)
            - 0.5 * math.log(math.pi * nu * self.sigma2)
        )
        return _out(log_norm - 0.5 * (nu + 1.0) * np.log1p(z * z / nu))

    def pdf(self, x):
        return _out(np.exp(self.logpdf(x)))

    def cdf(self, x):
        # The upper half is taken by symmetry; stdtr alone is not monotone near 1.
        z = self._z(x)
        upper = 1.0 - special.stdtr(self.nu, -np.abs(z))
        return _out(np.where(z > 0.0, upper, special.stdtr(self.nu, z)))

    def quantile(self, p):
        _check_probability(p)
        return _out(self.mu + self.sigma * special.stdtrit(self.nu, np.asarray(p, dtype=float)))

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        _check_count(k)
        return self.mu + self.sigma * rng.standard_t(self.nu, size=k)

    def mean(self) -> float:
        return self.mu if self.nu > 1.0 else math.nan

    def variance(self) -> float:
        if self.nu > 2.0:
            return self.sigma2 * self.nu / (self.nu - 2.0)
        return math.inf

    def shift(self, delta: float) -> NonStandardizedT:
        return NonStandardizedT(self.nu, self.mu + delta, self.sigma2)


@dataclass(frozen=True)
class NormalMixture:
    """Finite mixture of Normal distributions.

    Fields:
        components (tuple[tuple[float, float, float], ...]): Ordered
            ``(weight, mu, sigma2)`` triples. Weights are non-negative and sum to 1.
    """

    components: tuple[tuple[float, float, float], ...]

    kind = "mixture"

    def __post_init__(self):
        components = tuple(
            (float(w), float(mu), float(s2)) for w, mu, s2 in self.components
        )
        object.__setattr__(self, "components", components)
        if not components:
            raise ParameterDomainError("a Normal mixture needs at least one component")
        weights, mus, sigma2s = (np.array(column) for column in zip(*components))
        if np.any(weights < 0.0) or not np.all(np.isfinite(weights)):
            raise ParameterDomainError("mixture weights must be non-negative")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ParameterDomainError(
                f"mixture weights must sum to 1, got {math.fsum(weights)!r}"
            )
        if not np.all(np.isfinite(mus)):
            raise ParameterDomainError("mixture component means must be finite")
        bad = np.flatnonzero(~(np.isfinite(sigma2s) & (sigma2s > 0.0)))
        if bad.size:
            raise ParameterDomainError(
                f"mixture component {int(bad[0])} has non-positive variance {sigma2s[bad[0]]}"
            )
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_mus", mus)
        object.__setattr__(self, "_sigma2s", sigma2s)
        object.__setattr__(self, "_sigmas", np.sqrt(sigma2s))

    @classmethod
    def equal_weights(cls, mus, sigma2s) -> NormalMixture:
        mus = np.asarray(mus, dtype=float)
        sigma2s = np.asarray(sigma2s, dtype=float)
        weight = 1.0 / mus.size
        return cls(tuple((weight, mu, s2) for mu, s2 in zip(mus, sigma2s)))

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def mus(self) -> np.ndarray:
        return self._mus

    @property
    def sigma2s(self) -> np.ndarray:
        return self._sigma2s

    @property
    def sigmas(self) -> np.ndarray:
        return self._sigmas

    def __len__(self) -> int:
        return len(self.components)

    def _z(self, x):
        x = np.asarray(x, dtype=float)
        return (x[..., None] - self._mus) / self._sigmas

    def logpdf(self, x):
        z = self._z(x)
        log_components = -0.5 * LOG_2PI - np.log(self._sigmas) - 0.5 * z * z
        return _out(special.logsumexp(log_components, b=self._weights, axis=-1))

    def pdf(self, x):
        z = self._z(x)
        densities = np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * self._sigmas)
        return _out(densities @ self._weights)

    def cdf(self, x):
        return _out(special.ndtr(self._z(x)) @ self._weights)

    def _bracket(self) -> tuple[float, float]:
        spread = MIXTURE_BRACKET_SIGMAS * float(self._sigmas.max())
        return float(self._mus.min()) - spread, float(self._mus.max()) + spread

    def quantile(self, p):
        _check_probability(p)
        if np.ndim(p) > 0:
            return np.array([self.quantile(float(level)) for level in np.ravel(p)]).reshape(
                np.shape(p)
            )
        if len(self) == 1:
            return float(self._mus[0] + self._sigmas[0] * special.ndtri(p))
        lower, upper = self._bracket()
        scale = max(1.0, abs(lower), abs(upper))
        return float(
            optimize.brentq(
                lambda x: self.cdf(x) - p,
                lower,
                upper,
                xtol=1e-14 * scale,
                rtol=4.0 * np.finfo(float).eps,
                maxiter=500,
            )
        )

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        _check_count(k)
        index = rng.choice(len(self), size=k, p=self._weights)
        return rng.normal(self._mus[index], self._sigmas[index])

    def mean(self) -> float:
        return float(self._weights @ self._mus)

    def variance(self) -> float:
        # Law of total variance: mean of component variances plus variance of means.
        mean = self.mean()
        return float(self._weights @ (self.sigma2s + (self._mus - mean) ** 2))

    def shift(self, delta: float) -> NormalMixture:
        return NormalMixture(tuple((w, mu + delta, s2) for w, mu, s2 in self.components))


PredictiveDist = Union[Normal, NonStandardizedT, NormalMixture]


def pdf(d: PredictiveDist, x):
    return d.pdf(x)


def logpdf(d: PredictiveDist, x):
    return d.logpdf(x)


def cdf(d: PredictiveDist, x):
    return d.cdf(x)


def quantile(d: PredictiveDist, p):
    return d.quantile(p)


def sample(d: PredictiveDist, rng: np.random.Generator, k: int) -> np.ndarray:
    return d.sample(rng, k)
