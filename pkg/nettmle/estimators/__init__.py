"""Estimators of the interventional mean: TMLE, its direct plug-in and the baselines."""

from .base import Estimator, EstimatorSettings
from .basis import BasisSpec, basis_features, design_matrix
from .competitors import AniEstimate, ani_estimate, ndi_estimate, network_hac_variance
from .inference import (
    confidence_interval,
    estimate_variance,
    hg_efficiency_oracle,
    projection_variance,
    sigma_x_bootstrap,
    sigma_x_projection_oracle,
    sigma_y_hat,
)
from .initial import InitialEstimate, RhoProfile, fit_fixed_rho, profile_rho, ridge_fit
from .kde import ConditionalKde, conditional_density_kde
from .methods import ESTIMATORS, get_estimator
from .pipeline import run_pipeline
from .tmle import (
    BootstrapEstimate,
    TargetedModel,
    bootstrap_psi,
    estimate_psi,
    estimate_psi_de,
    fit_targeted_model,
    plug_in_bias,
    residualize,
    target_step,
    untargeted_model,
)

__all__ = [
    "AniEstimate",
    "BasisSpec",
    "BootstrapEstimate",
    "ConditionalKde",
    "ESTIMATORS",
    "Estimator",
    "EstimatorSettings",
    "InitialEstimate",
    "RhoProfile",
    "TargetedModel",
    "ani_estimate",
    "basis_features",
    "bootstrap_psi",
    "conditional_density_kde",
    "confidence_interval",
    "design_matrix",
    "estimate_psi",
    "estimate_psi_de",
    "estimate_variance",
    "fit_fixed_rho",
    "fit_targeted_model",
    "get_estimator",
    "hg_efficiency_oracle",
    "ndi_estimate",
    "network_hac_variance",
    "plug_in_bias",
    "profile_rho",
    "projection_variance",
    "residualize",
    "ridge_fit",
    "run_pipeline",
    "sigma_x_bootstrap",
    "sigma_x_projection_oracle",
    "sigma_y_hat",
    "target_step",
    "untargeted_model",
]
