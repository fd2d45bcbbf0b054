"""The four recalibration methods behind one fit/predict interface."""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

from django.conf import settings

from apps.bootstrap.resampling import (
    BootstrapEnsemble,
    BootstrapSettings,
    bootstrap_fit,
    bootstrap_predict,
)
from apps.core.exceptions import ParameterDomainError
from apps.distributions.families import PredictiveDist
from apps.mos import regression
from apps.mos.regression import MosFit, fit_mos, mos_predict_plugin, mos_predict_t
from apps.mos.training import TrainingSet
from apps.ngr import fitting
from apps.ngr.fitting import NgrFit, OptimizerSettings, fit_ngr, ngr_predict_plugin

MOS_PLUGIN = "mos-plugin"
MOS_T = "mos-t"
NGR_PLUGIN = "ngr-plugin"
NGR_BOOTSTRAP = "ngr-bootstrap"


@dataclass(frozen=True)
class FitOptions:
    """Everything a fit needs besides the training data.

    ``seed`` only matters for the bootstrap; the harness derives it per fold.
    """

    seed: int = 0
    bootstrap_k: int = 50
    redraw_cap_factor: int = 100
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)

    @classmethod
    def from_settings(cls, **overrides) -> FitOptions:
        boot = BootstrapSettings.from_settings()
        values = {
            "seed": settings.RECAL_SEED,
            "bootstrap_k": boot.k,
            "redraw_cap_factor": boot.redraw_cap_factor,
            "optimizer": OptimizerSettings.from_settings(),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass(frozen=True)
class Recalibrator:
    name: str
    min_training: int
    fit: Callable[[TrainingSet, FitOptions], object]
    predict: Callable[[object, float, float], PredictiveDist]
    parameters: Callable[[object], dict[str, object]]


def _mos_parameters(model: MosFit) -> dict[str, object]:
    return {
        "a": model.a_hat,
        "b": model.b_hat,
        "c2": model.c2_hat,
        "n": model.n,
        "m_bar": model.m_bar,
        "ss_m": model.ss_m,
        "degrees_of_freedom": model.degrees_of_freedom,
    }


def _ngr_parameters(model: NgrFit) -> dict[str, object]:
    params = model.params
    return {
        "a": params.a,
        "b": params.b,
        "c": params.c,
        "d": params.d,
        "log_likelihood": model.log_likelihood,
        "converged": model.converged,
        "iterations": model.iterations,
        "evaluations": model.evaluations,
        "variance_floor": model.variance_floor,
    }


def _bootstrap_parameters(model: BootstrapEnsemble) -> dict[str, object]:
    record: dict[str, object] = {
        "k": model.k,
        "failed_draws": model.failed_draws,
        "base_seed": model.base_seed,
    }
    for index, params in enumerate(model.replicates):
        for name in ("a", "b", "c", "d"):
            record[f"replicate_{index:04d}_{name}"] = getattr(params, name)
    return record


def _fit_bootstrap(train: TrainingSet, options: FitOptions) -> BootstrapEnsemble:
    return bootstrap_fit(
        train,
        options.bootstrap_k,
        options.seed,
        opts=options.optimizer,
        redraw_cap_factor=options.redraw_cap_factor,
    )


RECALIBRATORS: dict[str, Recalibrator] = {
    MOS_PLUGIN: Recalibrator(
        MOS_PLUGIN,
        regression.MIN_TRAINING_SIZE,
        lambda train, options: fit_mos(train),
        lambda model, m, v: mos_predict_plugin(model, m),
        _mos_parameters,
    ),
    MOS_T: Recalibrator(
        MOS_T,
        regression.MIN_TRAINING_SIZE,
        lambda train, options: fit_mos(train),
        lambda model, m, v: mos_predict_t(model, m),
        _mos_parameters,
    ),
    NGR_PLUGIN: Recalibrator(
        NGR_PLUGIN,
        fitting.MIN_TRAINING_SIZE,
        lambda train, options: fit_ngr(train, options.optimizer),
        ngr_predict_plugin,
        _ngr_parameters,
    ),
    NGR_BOOTSTRAP: Recalibrator(
        NGR_BOOTSTRAP,
        fitting.MIN_TRAINING_SIZE,
        _fit_bootstrap,
        bootstrap_predict,
        _bootstrap_parameters,
    ),
}


def get_recalibrator(name: str) -> Recalibrator:
    try:
        return RECALIBRATORS[name]
    except KeyError:
        raise ParameterDomainError(
            f"unknown recalibrator {name!r}; expected one of {', '.join(RECALIBRATORS)}"
        ) from None


@dataclass(frozen=True)
class FittedRecalibrator:
    recalibrator: Recalibrator
    model: object

    @property
    def name(self) -> str:
        return self.recalibrator.name

    def predict(self, m_star: float, v_star: float) -> PredictiveDist:
        return self.recalibrator.predict(self.model, float(m_star), float(v_star))

    def parameters(self) -> dict[str, object]:
        return self.recalibrator.parameters(self.model)


def fit_recalibrator(name: str, train: TrainingSet, options: FitOptions) -> FittedRecalibrator:
    recalibrator = get_recalibrator(name)
    return FittedRecalibrator(recalibrator, recalibrator.fit(train, options))
