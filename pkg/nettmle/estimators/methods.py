"""The four registered estimators: TMLE, DE, NDI and ANI."""

import numpy as np

from ..errors import ParameterError
from ..schema import MethodResult, VarianceEstimate
from ..sem import Dataset
from .base import Estimator, EstimatorSettings
from .competitors import ani_estimate, ndi_estimate
from .inference import confidence_interval
from .initial import profile_rho
from .pipeline import run_pipeline


def _initial_fit(dataset: Dataset, settings: EstimatorSettings):
    return profile_rho(
        dataset,
        settings.basis,
        settings.ridge_penalty(dataset.n_nodes),
        delta_rho=settings.delta_rho,
        objective=settings.initial.objective,
        standardize=settings.initial.standardize,
    )


class TmleEstimator(Estimator):
    @property
    def name(self) -> str:
        return "TMLE"

    @property
    def description(self) -> str:
        return "Profile ridge fit of (rho, g), targeted along omega(rho_hat), bootstrap plug-in"

    def estimate(self, dataset, policy, settings, rng) -> MethodResult:
        initial = _initial_fit(dataset, settings)
        return run_pipeline(
            self.name, initial, dataset, policy, settings.bootstrap, rng, settings.level, settings.delta_rho
        )


class DirectEstimator(Estimator):
    @property
    def name(self) -> str:
        return "DE"

    @property
    def description(self) -> str:
        return "The TMLE initial fit plugged in without the targeting step"

    def estimate(self, dataset, policy, settings, rng) -> MethodResult:
        initial = _initial_fit(dataset, settings)
        return run_pipeline(
            self.name,
            initial,
            dataset,
            policy,
            settings.bootstrap,
            rng,
            settings.level,
            settings.delta_rho,
            targeted=False,
        )


class NdiEstimator(Estimator):
    @property
    def name(self) -> str:
        return "NDI"

    @property
    def description(self) -> str:
        return "Targeted plug-in with the autoregressive term dropped (rho = 0)"

    def estimate(self, dataset, policy, settings, rng) -> MethodResult:
        return ndi_estimate(
            dataset,
            policy,
            settings.basis,
            settings.ridge_penalty(dataset.n_nodes),
            settings.bootstrap,
            rng,
            settings.level,
            settings.delta_rho,
            settings.initial.standardize,
        )


class AniEstimator(Estimator):
    @property
    def name(self) -> str:
        return "ANI"

    @property
    def description(self) -> str:
        return "Weighted mean of y with Gaussian-KDE ratios p*(v|c) / p(v|c)"

    def estimate(self, dataset, policy, settings, rng) -> MethodResult:
        fit = ani_estimate(dataset, policy, settings.kde, rng)
        variance = VarianceEstimate(sigma2_y_part=fit.se**2, sigma2_x_part=0.0, method="network-hac")
        ci_lo, ci_hi = confidence_interval(fit.psi_hat, variance, settings.level)
        return MethodResult(
            method=self.name,
            psi_hat=fit.psi_hat,
            se=fit.se,
            ci_lo=ci_lo,
            ci_hi=ci_hi,
            variance=variance,
            diagnostics={
                "clipped_fraction": fit.clipped_fraction,
                "floor_fraction": fit.floor_fraction,
                "clip": settings.kde.clip,
                "mean_weight": float(np.mean(fit.weights)),
            },
        )


ESTIMATORS: dict[str, type[Estimator]] = {
    "TMLE": TmleEstimator,
    "DE": DirectEstimator,
    "NDI": NdiEstimator,
    "ANI": AniEstimator,
}


def get_estimator(name: str) -> Estimator:
    """Instantiate a registered estimator by its method label."""
    if name not in ESTIMATORS:
        raise ParameterError(f"Unknown method '{name}', expected one of {sorted(ESTIMATORS)}")
    return ESTIMATORS[name]()
