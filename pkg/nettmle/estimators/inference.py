"""Variance estimation, confidence intervals and the H-vs-G efficiency check."""

import logging

import numpy as np
from scipy.stats import norm

from ..config import BootstrapConfig, SimConfig
from ..errors import ParameterError
from ..graph import AdjacencyGraph, neighborhoods, omega, row_normalize
from ..rng import child_seed, derive_rng
from ..schema import VarianceEstimate
from ..sem import Dataset, InterventionPolicy, aggregation_operator, summarize_x, summarize_z, true_g
from .tmle import TargetedModel, bootstrap_psi

logger = logging.getLogger(__name__)

PROJECTION_MAX_NODES = 100
EFFICIENCY_MAX_NODES = 60


def sigma_y_hat(model: TargetedModel, dataset: Dataset) -> tuple[float, float]:
    """Plug-in outcome-noise part ``N^{-2} sum_i omega_i^2 sigma_y^2``.

    Returns:
        ``(sigma2_N_y, sigma2_y)`` with ``sigma2_y = ||y - rho W y - g_t(v, c)||^2 / N``
    """
    n = dataset.n_nodes
    lagged = row_normalize(dataset.graph).matrix @ dataset.y
    residual = dataset.y - model.rho_hat0 * lagged - model.evaluate(dataset.v, dataset.c)
    sigma2_y = float(residual @ residual / n)
    return float(model.omega_hat @ model.omega_hat * sigma2_y / n**2), sigma2_y


def sigma_x_bootstrap(
    model: TargetedModel,
    dataset: Dataset,
    policy: InterventionPolicy,
    n_outer: int,
    n_inner: int,
    rng: np.random.Generator,
    chunk_size: int = 256,
) -> float:
    """Nested bootstrap for the covariate part.

    Outer sample ``x(m)`` is drawn from the empirical law of ``x``; inner samples resample
    ``x(m)``. The estimate is the (divisor M) variance of the inner means.
    """
    if n_outer < 50 or n_inner < 50:
        raise ParameterError(f"sigma_x_bootstrap needs M >= 50 and B >= 50, got M={n_outer}, B={n_inner}")

    n = dataset.n_nodes
    root = child_seed(rng)
    outer_means = np.empty(n_outer)
    for m in range(n_outer):
        stream = derive_rng(root, "outer", m)
        x_outer = dataset.x[stream.integers(0, n, size=n)]
        inner = bootstrap_psi(model, x_outer, dataset, policy, n_inner, child_seed(stream), chunk_size)
        outer_means[m] = inner.mean()
    return float(np.var(outer_means))


def sigma_x_projection_oracle(
    model: TargetedModel,
    dataset: Dataset,
    policy: InterventionPolicy,
    n_mc: int,
    rng: np.random.Generator,
    chunk_size: int = 8,
) -> float:
    """Projection estimate ``N^{-2} sum_l {h(x_l) - hbar}^2`` of the covariate part.

    ``h(x) = N^{-1} sum_k sum_{i in D_k} omega_i E[g_t,i | X_k = x]``, with the remaining
    covariates drawn from the empirical law and ``Z*`` from the policy. The inner
    expectations share one set of ``n_mc`` draws across all evaluation points.
    """
    n = dataset.n_nodes
    if n > PROJECTION_MAX_NODES:
        raise ParameterError(
            f"Projection oracle is limited to N <= {PROJECTION_MAX_NODES} (got {n}); use sigma_x_bootstrap"
        )
    if n_mc < 1000:
        raise ParameterError(f"Projection oracle needs n_mc >= 1000, got {n_mc}")

    stream = derive_rng(child_seed(rng), "projection")
    draws = dataset.x[stream.integers(0, n, size=(n_mc, n))]
    uniforms = stream.random((n_mc, n))
    h = _projection_h(
        points=dataset.x,
        draws=draws,
        uniforms=uniforms,
        graph=dataset.graph,
        summary=dataset.summary,
        policy=policy,
        outcome=model.evaluate_nodes,
        weights=model.omega_hat,
        chunk_size=chunk_size,
    )
    return float(np.sum((h - h.mean()) ** 2) / n**2)


def _projection_h(points, draws, uniforms, graph, summary, policy, outcome, weights, chunk_size) -> np.ndarray:
    """Evaluate ``h`` at each row of ``points`` using common inner draws.

    Setting ``X_k`` moves ``C`` only on the closed neighbourhood of ``k``. Policies act node
    by node, so ``Z*`` moves there too, and ``V`` and ``g`` move only on ``D_k``. Each
    point therefore updates the shared baseline on those rows instead of recomputing the
    whole network. ``outcome(v, c, nodes)`` evaluates the fit for the listed nodes.
    """
    n = graph.n_nodes
    index = neighborhoods(graph)
    operator = aggregation_operator(graph, summary)
    c_base = summarize_x(draws, graph, summary)
    z_base = policy.assign(c_base, uniforms)
    v_base = summarize_z(z_base, graph, summary)

    h = np.zeros(points.shape[0])
    for k in range(n):
        closed, affected = index.closed[k], index.two_hop[k]
        # loadings of X_k on C at the closed / two-hop rows
        own_closed = (closed == k).astype(float)[:, None]
        agg_closed = operator[closed][:, [k]].toarray()
        own_affected = (affected == k).astype(float)[:, None]
        agg_affected = operator[affected][:, [k]].toarray()
        # loadings of Z on V at the two-hop rows, for treatments on the closed rows
        pick = (affected[:, None] == closed[None, :]).astype(float)
        agg_z = operator[affected][:, closed].toarray()

        c_closed = c_base[:, closed]
        c_affected = c_base[:, affected]
        z_closed = z_base[:, closed]
        v_affected = v_base[:, affected]
        u_closed = uniforms[:, closed]
        w_affected = weights[affected]
        for start in range(0, points.shape[0], chunk_size):
            block = points[start : start + chunk_size]
            delta = (block[:, None, :] - draws[None, :, k, :])[:, :, None, :]
            c_new = c_closed + np.concatenate([delta * own_closed, delta * agg_closed], axis=-1)
            dz = policy.assign(c_new, u_closed) - z_closed
            v = v_affected + np.stack([dz @ pick.T, dz @ agg_z.T], axis=-1)
            c = c_affected + np.concatenate([delta * own_affected, delta * agg_affected], axis=-1)
            g = outcome(v, c, affected)
            h[start : start + block.shape[0]] += g.mean(axis=1) @ w_affected
    return h / n


def estimate_variance(
    model: TargetedModel,
    dataset: Dataset,
    policy: InterventionPolicy,
    bootstrap: BootstrapConfig,
    rng: np.random.Generator,
) -> VarianceEstimate:
    """Plug-in y-part plus nested-bootstrap x-part."""
    y_part, sigma2_y = sigma_y_hat(model, dataset)
    x_part = sigma_x_bootstrap(
        model, dataset, policy, bootstrap.n_outer, bootstrap.n_inner, rng, bootstrap.chunk_size
    )
    return VarianceEstimate(
        sigma2_y_part=y_part,
        sigma2_x_part=x_part,
        sigma2_y=sigma2_y,
        method="nested-bootstrap",
        n_outer=bootstrap.n_outer,
        n_inner=bootstrap.n_inner,
    )


def projection_variance(
    model: TargetedModel,
    dataset: Dataset,
    policy: InterventionPolicy,
    n_mc: int,
    rng: np.random.Generator,
) -> VarianceEstimate:
    """Plug-in y-part plus projection-oracle x-part (small N only)."""
    y_part, sigma2_y = sigma_y_hat(model, dataset)
    x_part = sigma_x_projection_oracle(model, dataset, policy, n_mc, rng)
    return VarianceEstimate(
        sigma2_y_part=y_part, sigma2_x_part=x_part, sigma2_y=sigma2_y, method="projection-oracle"
    )


def confidence_interval(psi_hat: float, variance: VarianceEstimate, level: float = 0.95) -> tuple[float, float]:
    """Normal-quantile interval ``psi_hat +/- z * sqrt(total)``."""
    if not 0.0 < level < 1.0:
        raise ParameterError(f"Confidence level must lie in (0, 1), got {level}")
    half_width = float(norm.ppf(0.5 + level / 2.0)) * variance.se
    return psi_hat - half_width, psi_hat + half_width


def hg_efficiency_oracle(
    config: SimConfig,
    graph: AdjacencyGraph,
    policy: InterventionPolicy,
    n_reps: int,
    rng: np.random.Generator,
    n_inner: int = 200,
    chunk_size: int = 16,
) -> tuple[float, float]:
    """Empirical variances of the projection statistic H(x) and the raw statistic G(x).

    ``G(x) = -N^{-1} sum_i omega0_i f0_i(x_{D_i})`` is evaluated on ``n_reps`` iid draws of
    x, with ``f0_i`` the policy average of ``g0`` (Monte Carlo over ``n_inner`` treatment
    draws). Because ``H(x) = -N^{-1} sum_l h(x_l)`` with iid ``x_l``,
    ``var(H) = N^{-1} var h(X)``, which is estimated from ``h`` at ``n_reps`` iid points.

    Returns:
        ``(var_H, var_G)``
    """
    n = graph.n_nodes
    if n > EFFICIENCY_MAX_NODES:
        raise ParameterError(f"hg_efficiency_oracle is limited to N <= {EFFICIENCY_MAX_NODES}, got {n}")
    if n_reps < 500:
        raise ParameterError(f"hg_efficiency_oracle needs n_reps >= 500, got {n_reps}")

    weights = omega(row_normalize(graph), config.rho0, config.delta_rho)

    def outcome(v, c, nodes=None):
        return true_g(v, c, config.g)

    root = child_seed(rng)
    g_stream = derive_rng(root, "G")
    treatment_uniforms = g_stream.random((n_inner, n))
    g_values = np.empty(n_reps)
    for start in range(0, n_reps, chunk_size):
        size = min(chunk_size, n_reps - start)
        x = g_stream.standard_normal((size, n, config.x_dim))
        c = summarize_x(x, graph, config.summary)[:, None]
        v = summarize_z(policy.assign(c, treatment_uniforms), graph, config.summary)
        f = outcome(v, c).mean(axis=1)
        g_values[start : start + size] = -(f @ weights) / n

    h_stream = derive_rng(root, "H")
    points = h_stream.standard_normal((n_reps, config.x_dim))
    draws = h_stream.standard_normal((n_inner, n, config.x_dim))
    uniforms = h_stream.random((n_inner, n))
    h = _projection_h(points, draws, uniforms, graph, config.summary, policy, outcome, weights, chunk_size)

    var_h = float(np.var(h, ddof=1) / n)
    var_g = float(np.var(g_values, ddof=1))
    logger.debug(f"hg_efficiency_oracle: var_H={var_h:.4e}, var_G={var_g:.4e}")
    return var_h, var_g
