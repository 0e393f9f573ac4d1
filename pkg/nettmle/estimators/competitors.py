"""Baseline estimators: NDI (no autoregressive term) and ANI (kernel density-ratio weighting)."""

import logging
import math
from typing import NamedTuple

import numpy as np

from ..config import BootstrapConfig, KdeConfig
from ..errors import ParameterError
from ..graph import DEFAULT_DELTA_RHO, neighborhoods
from ..schema import MethodResult
from ..sem import Dataset, InterventionPolicy, summarize_z
from .basis import BasisSpec
from .initial import fit_fixed_rho
from .kde import ConditionalKde
from .pipeline import run_pipeline

logger = logging.getLogger(__name__)

FLOOR_WARN_FRACTION = 0.10


class AniEstimate(NamedTuple):
    psi_hat: float
    se: float
    weights: np.ndarray
    clipped_fraction: float
    floor_fraction: float


def ndi_estimate(
    dataset: Dataset,
    policy: InterventionPolicy,
    basis: BasisSpec,
    lam: float,
    bootstrap: BootstrapConfig,
    rng: np.random.Generator,
    level: float = 0.95,
    delta_rho: float = DEFAULT_DELTA_RHO,
    standardize: bool = True,
) -> MethodResult:
    """Network direct interference: the targeted pipeline with rho held at 0 (``omega = 1``)."""
    initial = fit_fixed_rho(dataset, basis, lam, rho=0.0, delta_rho=delta_rho, standardize=standardize)
    return run_pipeline("NDI", initial, dataset, policy, bootstrap, rng, level, delta_rho, targeted=True)


def network_hac_variance(scores: np.ndarray, dataset: Dataset) -> float:
    """Variance of the mean of ``scores`` with a uniform kernel over the two-hop sets.

    ``N^{-2} sum_i sum_{j in D_i} u_i u_j`` for centred ``u``; falls back to the i.i.d.
    value ``N^{-2} sum_i u_i^2`` when the kernel estimate is not positive.
    """
    u = np.asarray(scores, dtype=float) - np.mean(scores)
    n = u.size
    two_hop = neighborhoods(dataset.graph).two_hop
    hac = float(sum(u[i] * u[d].sum() for i, d in enumerate(two_hop)) / n**2)
    if hac > 0.0:
        return hac
    logger.warning("Network HAC variance is not positive; using the i.i.d. variance")
    return float(u @ u / n**2)


def ani_estimate(
    dataset: Dataset,
    policy: InterventionPolicy,
    kde: KdeConfig,
    rng: np.random.Generator,
) -> AniEstimate:
    """Density-ratio weighted mean ``N^{-1} sum_i y_i p*_hat(v_i|c_i) / p_hat(v_i|c_i)``.

    ``p_hat`` is the conditional KDE of the observed ``(v, c)`` pairs. ``p*_hat`` is the
    same estimator fitted to ``ceil(n_star_draws / N)`` treatment vectors drawn from the
    policy given the observed covariates. Ratios are clipped to ``[1/clip, clip]``.

    Raises:
        ParameterError: non-stochastic policy
    """
    if not policy.is_stochastic:
        raise ParameterError(f"ANI needs a stochastic policy; '{policy.kind}' has a degenerate density")

    n = dataset.n_nodes
    n_star = kde.n_star_draws if kde.n_star_draws is not None else 10 * n
    n_vectors = max(1, math.ceil(n_star / n))

    observed = ConditionalKde(dataset.v, dataset.c, kde.bandwidth_multiplier, kde.floor)
    z_star = policy.sample(np.broadcast_to(dataset.c, (n_vectors,) + dataset.c.shape), rng)
    v_star = summarize_z(z_star, dataset.graph, dataset.summary)
    interventional = ConditionalKde(
        v_star.reshape(-1, v_star.shape[-1]),
        np.broadcast_to(dataset.c, (n_vectors,) + dataset.c.shape).reshape(-1, dataset.c.shape[-1]),
        kde.bandwidth_multiplier,
        kde.floor,
    )

    p_obs = observed.evaluate(dataset.v, dataset.c)
    p_star = interventional.evaluate(dataset.v, dataset.c)
    floored = (p_obs <= kde.floor) | (p_star <= kde.floor)
    floor_fraction = float(floored.mean())
    if floor_fraction > FLOOR_WARN_FRACTION:
        logger.warning(f"ANI positivity floor hit for {floor_fraction:.1%} of nodes")

    ratio = p_star / p_obs
    weights = np.clip(ratio, 1.0 / kde.clip, kde.clip)
    clipped_fraction = float(np.mean(weights != ratio))

    scores = dataset.y * weights
    psi_hat = float(scores.mean())
    se = math.sqrt(network_hac_variance(scores, dataset))
    return AniEstimate(
        psi_hat=psi_hat,
        se=se,
        weights=weights,
        clipped_fraction=clipped_fraction,
        floor_fraction=floor_fraction,
    )
