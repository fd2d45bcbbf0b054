"""Proper scores for predictive distributions: Ignorance, CRPS, CRPSS and PIT."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy import integrate, special

from apps.core.exceptions import QuadratureError, UndefinedScoreError
from apps.distributions.families import (
    NonStandardizedT,
    Normal,
    NormalMixture,
    PredictiveDist,
)

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
SQRT_PI = math.sqrt(math.pi)
# Returned for an observation with zero forecast density; overflow never yields it
# because densities are handled on the log scale.
ZERO_DENSITY_IGNORANCE = math.inf


@dataclass(frozen=True)
class VerificationRecord:
    """Scores of one forecast against its observation.

    Fields:
        pit (float): Forecast cdf at the observation.
        ignorance_bits (float): -log2 of the forecast density at the observation.
        crps (float): Continuous ranked probability score, units of the variable.
    """

    pit: float
    ignorance_bits: float
    crps: float


def ignorance(d: PredictiveDist, y: float) -> float:
    """Ignorance score in bits."""
    if isinstance(d, Normal):
        bits = (0.5 * math.log(2.0 * math.pi * d.sigma2) + (y - d.mu) ** 2 / (2.0 * d.sigma2)) / LOG2
    elif isinstance(d, NonStandardizedT):
        nu = d.nu
        bits = (
            -special.gammaln(0.5 * (nu + 1.0))
            + special.gammaln(0.5 * nu)
            + 0.5 * math.log(math.pi * nu * d.sigma2)
            + 0.5 * (nu + 1.0) * math.log1p((y - d.mu) ** 2 / (nu * d.sigma2))
        ) / LOG2
    else:
        bits = -d.logpdf(y) / LOG2
    bits = float(bits)
    if math.isinf(bits):
        logger.warning("forecast density is zero at observation %r; ignorance is infinite", y)
        return ZERO_DENSITY_IGNORANCE
    return bits


def crps_normal(d: Normal, y: float) -> float:
    z = (y - d.mu) / d.sigma
    return float(d.sigma * (z * (2.0 * special.ndtr(z) - 1.0) + 2.0 * _phi(z) - 1.0 / SQRT_PI))


def _phi(z):
    return np.exp(-0.5 * np.square(z)) / math.sqrt(2.0 * math.pi)


def mixture_a(mu, sigma2):
    """A(mu, s2) = 2 s phi(mu / s) + mu (2 Phi(mu / s) - 1), the mean of |X| for X ~ N(mu, s2)."""
    mu = np.asarray(mu, dtype=float)
    sigma = np.sqrt(np.asarray(sigma2, dtype=float))
    z = mu / sigma
    value = 2.0 * sigma * _phi(z) + mu * (2.0 * special.ndtr(z) - 1.0)
    return float(value) if value.ndim == 0 else value


def crps_mixture(d: NormalMixture, y: float) -> float:
    """Closed-form mixture CRPS.

    sum_k w_k A(y - mu_k, s2_k) - 1/2 sum_kl w_k w_l A(mu_k - mu_l, s2_k + s2_l).
    """
    w, mus, s2 = d.weights, d.mus, d.sigma2s
    first = float(w @ mixture_a(y - mus, s2))
    pair = mixture_a(mus[:, None] - mus[None, :], s2[:, None] + s2[None, :])
    second = 0.5 * float(w @ pair @ w)
    return max(first - second, 0.0)


def crps_quadrature(
    d: PredictiveDist,
    y: float,
    rtol: float | None = None,
    tail: float | None = None,
) -> float:
    """CRPS by adaptive quadrature of (F(x) - H(x - y))^2.

    The integral is split at ``y`` and truncated at the ``tail`` and
    ``1 - tail`` quantiles (extended to ``y`` when it lies outside them).
    """
    conf = settings.RECAL_QUADRATURE
    rtol = conf["RELATIVE_TOLERANCE"] if rtol is None else rtol
    tail = conf["TAIL_PROBABILITY"] if tail is None else tail
    limit = conf["LIMIT"]
    lower = min(d.quantile(tail), y)
    upper = max(d.quantile(1.0 - tail), y)

    pieces = (
        (lambda x: d.cdf(x) ** 2, lower, y),
        (lambda x: (1.0 - d.cdf(x)) ** 2, y, upper),
    )
    total = 0.0
    for integrand, a, b in pieces:
        if b <= a:
            continue
        result = integrate.quad(
            integrand, a, b, epsabs=1e-13, epsrel=rtol, limit=limit, full_output=1
        )
        value, error = result[0], result[1]
        if len(result) > 3 and error > 1e-6 * max(1.0, abs(value)):
            raise QuadratureError(
                f"CRPS quadrature on [{a:.6g}, {b:.6g}] did not converge "
                f"(estimate {value:.6g}, error {error:.3g}): {result[3]}"
            )
        total += value
    return total


def crps(d: PredictiveDist, y: float) -> float:
    if isinstance(d, Normal):
        return crps_normal(d, y)
    if isinstance(d, NormalMixture):
        return crps_mixture(d, y)
    if d.nu <= 1.0:
        raise UndefinedScoreError(
            f"CRPS of a t-distribution needs nu > 1 (finite mean), got nu={d.nu}"
        )
    return crps_quadrature(d, y)


def crpss(mean_crps_ref: float, mean_crps_new: float) -> float:
    """Relative CRPS improvement of the new forecast over the reference."""
    if not mean_crps_ref > 0.0:
        raise UndefinedScoreError(
            f"CRPSS needs a positive reference mean CRPS, got {mean_crps_ref}"
        )
    return (mean_crps_ref - mean_crps_new) / mean_crps_ref


def pit(d: PredictiveDist, y: float) -> float:
    return min(max(float(d.cdf(y)), 0.0), 1.0)


def verify(d: PredictiveDist, y: float) -> VerificationRecord:
    return VerificationRecord(pit=pit(d, y), ignorance_bits=ignorance(d, y), crps=crps(d, y))
