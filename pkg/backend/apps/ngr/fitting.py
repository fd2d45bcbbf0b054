"""Maximum-likelihood NGR fitting by Nelder-Mead simplex search."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from scipy import optimize

from apps.core.exceptions import DegenerateDesignError, InsufficientDataError
from apps.distributions.families import Normal
from apps.mos.regression import fit_mos
from apps.mos.training import TrainingSet
from apps.ngr.likelihood import LOG_2PI, NgrParams, ngr_exact_log_likelihood

logger = logging.getLogger(__name__)

MIN_TRAINING_SIZE = 4
RESTART_PERTURBATION = 0.1
POLISH_ITERATIONS = 100


@dataclass(frozen=True)
class OptimizerSettings:
    """Simplex search settings.

    Fields:
        max_evaluations (int): Likelihood evaluations allowed across the
            initial search and all restarts.
        tolerance (float): Stop once the simplex log-likelihood spread is below
            ``tolerance * (1 + |loglik|)``.
        restarts (int): Restarts from the perturbed optimum.
        initial_delta (float): Starting value of delta, where d = delta**2.
        variance_floor (float): Lower bound on c as a fraction of var(y).
    """

    max_evaluations: int = 10_000
    tolerance: float = 1e-10
    restarts: int = 1
    initial_delta: float = 1e-3
    variance_floor: float = 1e-8

    @classmethod
    def from_settings(cls) -> OptimizerSettings:
        conf = settings.RECAL_OPTIMIZER
        return cls(
            max_evaluations=conf["MAX_EVALUATIONS"],
            tolerance=conf["TOLERANCE"],
            restarts=conf["RESTARTS"],
            initial_delta=conf["INITIAL_DELTA"],
            variance_floor=conf["VARIANCE_FLOOR"],
        )


@dataclass(frozen=True)
class NgrFit:
    """Result of :func:`fit_ngr`.

    Fields:
        params (NgrParams): Fitted parameters.
        log_likelihood (float): Exact Gaussian log-likelihood at ``params``.
        converged (bool): False when the evaluation budget ran out first.
        iterations (int): Simplex iterations over all runs.
        evaluations (int): Likelihood evaluations over all runs.
        variance_floor (float): Lower bound applied to c.
        trace (tuple[float, ...]): Best log-likelihood after each simplex
            iteration of the retained run.
    """

    params: NgrParams
    log_likelihood: float
    converged: bool
    iterations: int
    evaluations: int = 0
    variance_floor: float = 0.0
    trace: tuple[float, ...] = field(default=(), repr=False)


def _canonical(train: TrainingSet) -> TrainingSet:
    # Fit on a fixed ordering so that permuted inputs give identical results.
    return train.take(np.lexsort((train.y, train.v, train.m)))


def _negative_log_likelihood(theta, m, v, y) -> float:
    a, b, c, delta = theta
    variance = c + delta * delta * v
    if np.any(variance <= 0.0):
        return math.inf
    residuals = y - a - b * m
    return 0.5 * float(np.sum(LOG_2PI + np.log(variance) + residuals**2 / variance))


def _simplex(theta0, arguments, bounds, fatol, max_evaluations):
    trace: list[float] = []

    def record(intermediate_result):
        trace.append(-float(intermediate_result.fun))

    result = optimize.minimize(
        _negative_log_likelihood,
        theta0,
        args=arguments,
        method="Nelder-Mead",
        bounds=bounds,
        callback=record,
        options={
            "maxfev": max_evaluations,
            "maxiter": max_evaluations,
            "fatol": fatol,
            "xatol": math.inf,
        },
    )
    return result, trace


def _polish(params: NgrParams, train: TrainingSet, floor: float) -> NgrParams:
    """Alternate the two closed-form conditional maxima of the likelihood.

    With the variances fixed, (a, b) is a weighted least-squares problem; with
    (a, b) fixed, a common rescaling of (c, d) has the maximiser mean(r^2 / s^2).
    Each step can only raise the likelihood.
    """
    m, v, y = train.m, train.v, train.y
    a, b, c, d = params.a, params.b, params.c, params.d
    for _ in range(POLISH_ITERATIONS):
        weights = 1.0 / (c + d * v)
        sw = weights.sum()
        m_w = weights @ m / sw
        y_w = weights @ y / sw
        dm = m - m_w
        b_new = float(weights @ (dm * (y - y_w)) / (weights @ (dm * dm)))
        a_new = float(y_w - b_new * m_w)
        residuals = y - a_new - b_new * m
        scale = float(np.mean(residuals**2 * weights))
        scale = max(scale, floor / c)
        c_new, d_new = c * scale, d * scale
        done = abs(scale - 1.0) < 1e-13 and abs(a_new - a) <= 1e-13 * (1 + abs(a)) and abs(
            b_new - b
        ) <= 1e-13 * (1 + abs(b))
        a, b, c, d = a_new, b_new, c_new, d_new
        if done:
            break
    return NgrParams(a, b, c, d)


def fit_ngr(train: TrainingSet, opts: OptimizerSettings | None = None) -> NgrFit:
    """Maximise the NGR likelihood over (a, b, c, delta) with d = delta**2.

    The search starts from the MOS estimates with the residual variance moved to
    the /n divisor, runs the simplex, restarts from a perturbed optimum and keeps
    the better run, then polishes with closed-form conditional updates.
    """
    opts = opts or OptimizerSettings.from_settings()
    n = train.n
    if n < MIN_TRAINING_SIZE:
        raise InsufficientDataError(
            f"NGR needs at least {MIN_TRAINING_SIZE} training cases, got {n}"
        )
    if train.distinct_means < 2:
        raise DegenerateDesignError("all training ensemble means are identical")

    train = _canonical(train)
    var_y = float(np.var(train.y))
    floor = opts.variance_floor * var_y if var_y > 0.0 else opts.variance_floor
    mos = fit_mos(train)
    c0 = max(mos.c2_hat * (n - 2) / n, floor)
    theta = np.array([mos.a_hat, mos.b_hat, c0, opts.initial_delta])

    arguments = (train.m, train.v, train.y)
    bounds = [(None, None), (None, None), (floor, None), (None, None)]
    loglik0 = -_negative_log_likelihood(theta, *arguments)
    fatol = opts.tolerance * (1.0 + abs(loglik0))

    budget = opts.max_evaluations
    best, best_trace = _simplex(theta, arguments, bounds, fatol, budget)
    iterations, evaluations = best.nit, best.nfev
    signs = np.array([1.0, -1.0, 1.0, -1.0])
    for _ in range(opts.restarts):
        remaining = budget - evaluations
        if remaining <= 0:
            break
        # Tolerance follows the objective scale at the incumbent optimum.
        fatol = opts.tolerance * (1.0 + abs(best.fun))
        x = best.x
        step = RESTART_PERTURBATION * np.where(x != 0.0, np.abs(x), opts.initial_delta)
        start = x + signs * step
        start[2] = max(start[2], floor)
        result, trace = _simplex(start, arguments, bounds, fatol, remaining)
        iterations += result.nit
        evaluations += result.nfev
        if result.fun < best.fun:
            best, best_trace = result, trace

    converged = bool(best.status == 0)
    if not converged:
        logger.warning(
            "NGR simplex stopped after %d evaluations without converging (n=%d)",
            evaluations,
            n,
        )
    a, b, c, delta = best.x
    params = _polish(NgrParams.from_delta(a, b, max(c, floor), delta), train, floor)
    loglik = ngr_exact_log_likelihood(params, train)
    if loglik < -best.fun:
        params = NgrParams.from_delta(a, b, max(c, floor), delta)
        loglik = ngr_exact_log_likelihood(params, train)
    return NgrFit(
        params=params,
        log_likelihood=loglik,
        converged=converged,
        iterations=int(iterations),
        evaluations=int(evaluations),
        variance_floor=floor,
        trace=tuple(best_trace),
    )


def ngr_predict_plugin(fit: NgrFit, m_star: float, v_star: float) -> Normal:
    return fit.params.predictive(m_star, v_star)
