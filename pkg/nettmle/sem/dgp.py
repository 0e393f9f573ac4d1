"""Structural equation model: outcome regression, data generation and the Monte Carlo truth."""

import logging
import math

import numpy as np
from scipy.special import expit

from ..config import GCoefficients, SimConfig
from ..errors import ParameterError
from ..graph import AdjacencyGraph, omega, row_normalize, solve_sar
from .dataset import Dataset, summarize_x, summarize_z
from .policy import InterventionPolicy

logger = logging.getLogger(__name__)


def true_g(v: np.ndarray, c: np.ndarray, coeffs: GCoefficients) -> np.ndarray:
    """Outcome regression ``g0(v, c)``.

    ``b0 + b_z z + b_nz zbar + b_x . x + b_nx . xbar + g1 z x1 + g2 x1^2 + g3 x2^2 + g4 x2^3``,
    with ``v = (z, zbar)`` and ``c = (x1, x2, xbar1, xbar2)``. Works on single rows or
    batches with a trailing feature axis.
    """
    v = np.asarray(v, dtype=float)
    c = np.asarray(c, dtype=float)
    z, x1, x2 = v[..., 0], c[..., 0], c[..., 1]
    g1, g2, g3, g4 = coeffs.gamma
    return (
        coeffs.intercept
        + coeffs.own_treatment * z
        + coeffs.neighbor_treatment * v[..., 1]
        + c[..., 0:2] @ np.asarray(coeffs.own_x)
        + c[..., 2:4] @ np.asarray(coeffs.neighbor_x)
        + g1 * z * x1
        + g2 * x1**2
        + g3 * x2**2
        + g4 * x2**3
    )


def draw_noise(config: SimConfig, size, rng: np.random.Generator) -> np.ndarray:
    """Outcome noise with standard deviation ``config.noise_sd``."""
    if config.noise == "uniform":
        half_width = math.sqrt(3.0) * config.noise_sd
        return rng.uniform(-half_width, half_width, size=size)
    return rng.normal(0.0, config.noise_sd, size=size)


def propensity(c: np.ndarray, config: SimConfig) -> np.ndarray:
    """Observational treatment probability ``logistic(alpha0 + c @ alpha)``."""
    return expit(config.treatment.intercept + c @ np.asarray(config.treatment.coefficients))


def draw_summaries(config: SimConfig, graph: AdjacencyGraph, n_draws: int, rng: np.random.Generator) -> np.ndarray:
    """``n_draws`` independent covariate summaries ``C`` of shape ``(n_draws, N, 2p)`` under X ~ N(0, I_p)."""
    x = rng.standard_normal((n_draws, graph.n_nodes, config.x_dim))
    return summarize_x(x, graph, config.summary)


def gen_dataset(config: SimConfig, graph: AdjacencyGraph, rng: np.random.Generator) -> Dataset:
    """Draw ``(Y, Z, X)`` from the structural equation model on ``graph``.

    X ~ N(0, I_p) iid, Z_i ~ Bernoulli(logistic(alpha' C_i)),
    Y = (I - rho0 W)^{-1} {g0(V, C) + eps}.
    """
    n = graph.n_nodes
    x = rng.standard_normal((n, config.x_dim))
    c = summarize_x(x, graph, config.summary)
    z = (rng.random(n) < propensity(c, config)).astype(float)
    v = summarize_z(z, graph, config.summary)
    eps = draw_noise(config, n, rng)

    W = row_normalize(graph)
    y = solve_sar(W, config.rho0, true_g(v, c, config.g) + eps, config.delta_rho)
    return Dataset(y=y, z=z, x=x, v=v, c=c, graph=graph, summary=config.summary)


def oracle_psi(
    config: SimConfig,
    graph: AdjacencyGraph,
    policy: InterventionPolicy,
    n_mc: int,
    rng: np.random.Generator,
    chunk_size: int = 512,
) -> tuple[float, float]:
    """Monte Carlo ground truth ``Psi = E[mean_i Y_i(Z*)]`` under the true model.

    Each draw refreshes ``(X, Z*, eps)``; the network average is computed as
    ``N^{-1} omega(rho0)' {g0(V*, C) + eps}``, which equals the mean of the SAR solution.

    Returns:
        ``(psi_true, mc_se)``
    """
    if n_mc < 1000:
        raise ParameterError(f"oracle_psi needs n_mc >= 1000, got {n_mc}")

    n = graph.n_nodes
    weights = omega(row_normalize(graph), config.rho0, config.delta_rho) / n
    averages = np.empty(n_mc)
    for start in range(0, n_mc, chunk_size):
        size = min(chunk_size, n_mc - start)
        x = rng.standard_normal((size, n, config.x_dim))
        c = summarize_x(x, graph, config.summary)
        z_star = policy.sample(c, rng)
        v_star = summarize_z(z_star, graph, config.summary)
        eps = draw_noise(config, (size, n), rng)
        averages[start : start + size] = (true_g(v_star, c, config.g) + eps) @ weights

    psi = float(averages.mean())
    mc_se = float(averages.std(ddof=1) / math.sqrt(n_mc))
    logger.debug(f"oracle_psi: psi={psi:.6f} (MC SE {mc_se:.2e}, n_mc={n_mc})")
    return psi, mc_se
