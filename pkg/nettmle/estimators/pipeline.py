"""The fit -> target -> bootstrap -> variance pipeline shared by TMLE, DE and NDI."""

import numpy as np

from ..config import BootstrapConfig
from ..graph import DEFAULT_DELTA_RHO
from ..rng import child_seed, derive_rng
from ..schema import MethodResult
from ..sem import Dataset, InterventionPolicy
from .inference import confidence_interval, estimate_variance
from .initial import InitialEstimate
from .tmle import estimate_psi, fit_targeted_model, plug_in_bias, untargeted_model


def run_pipeline(
    method: str,
    initial: InitialEstimate,
    dataset: Dataset,
    policy: InterventionPolicy,
    bootstrap: BootstrapConfig,
    rng: np.random.Generator,
    level: float = 0.95,
    delta_rho: float = DEFAULT_DELTA_RHO,
    targeted: bool = True,
) -> MethodResult:
    """Point estimate, variance and interval for one initial fit.

    The point bootstrap and the variance bootstrap use the streams ``(root, "psi")`` and
    ``(root, "variance")`` of a root drawn from ``rng``, so equal inputs and equal ``rng``
    state give identical results whatever produced ``initial``.
    """
    model = fit_targeted_model(initial, dataset, delta_rho) if targeted else untargeted_model(initial, dataset, delta_rho)
    root = child_seed(rng)
    point = estimate_psi(model, dataset, policy, bootstrap.n_boot, derive_rng(root, "psi"), bootstrap.chunk_size)
    variance = estimate_variance(model, dataset, policy, bootstrap, derive_rng(root, "variance"))
    ci_lo, ci_hi = confidence_interval(point.psi_hat, variance, level)
    return MethodResult(
        method=method,
        psi_hat=point.psi_hat,
        se=variance.se,
        ci_lo=ci_lo,
        ci_hi=ci_hi,
        t_star=model.t_star,
        rho_hat0=model.rho_hat0,
        variance=variance,
        diagnostics={
            "plug_in_bias": plug_in_bias(model, dataset),
            "omega_sum": float(model.omega_hat.sum()),
            "replicate_sd": float(point.replicates.std()),
            "n_boot": bootstrap.n_boot,
            "objective": initial.objective,
            "basis": initial.basis.name,
        },
    )
