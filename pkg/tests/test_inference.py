"""Tests for the variance estimators and confidence intervals."""

import numpy as np
import pytest

from nettmle.config import GCoefficients, SimConfig
from nettmle.errors import ParameterError
from nettmle.estimators import (
    BasisSpec,
    InitialEstimate,
    confidence_interval,
    estimate_variance,
    fit_targeted_model,
    hg_efficiency_oracle,
    profile_rho,
    sigma_x_bootstrap,
    sigma_x_projection_oracle,
    sigma_y_hat,
    untargeted_model,
)
from nettmle.estimators.inference import _projection_h
from nettmle.graph import gen_block, neighborhoods, omega, row_normalize
from nettmle.rng import derive_rng
from nettmle.schema import VarianceEstimate
from nettmle.sem import (
    Dataset,
    DeterministicPolicy,
    StochasticPolicy,
    ThresholdPolicy,
    gen_dataset,
    summarize_x,
    summarize_z,
    true_g,
)

FLAT_G = GCoefficients(
    own_treatment=0.0,
    neighbor_treatment=0.0,
    own_x=[0.0, 0.0],
    neighbor_x=[0.0, 0.0],
    gamma=[0.0, 0.0, 0.0, 0.0],
)


@pytest.fixture
def policy():
    return StochasticPolicy(pi_star=0.6)


def constant_model(dataset, k=2.0, rho=0.4):
    initial = InitialEstimate(rho_hat0=rho, beta=np.array([k]), basis=BasisSpec.intercept_only(), lam=0.0)
    return untargeted_model(initial, dataset)


def test_sigma_y_vanishes_for_the_exact_model(noiseless_dataset, true_beta):
    initial = InitialEstimate(rho_hat0=0.4, beta=true_beta, basis=BasisSpec.correct(), lam=0.0)
    y_part, sigma2_y = sigma_y_hat(untargeted_model(initial, noiseless_dataset), noiseless_dataset)
    assert sigma2_y == pytest.approx(0.0, abs=1e-12)
    assert y_part == pytest.approx(0.0, abs=1e-12)


def test_sigma_y_with_unit_weights(dataset):
    initial = InitialEstimate(rho_hat0=0.0, beta=np.array([0.0]), basis=BasisSpec.intercept_only(), lam=0.0)
    y_part, sigma2_y = sigma_y_hat(untargeted_model(initial, dataset), dataset)
    assert sigma2_y == pytest.approx(np.mean(dataset.y**2))
    assert y_part == pytest.approx(sigma2_y / dataset.n_nodes)


def test_sigma_y_scales_with_noise(block_graph, true_beta):
    parts = []
    for scale in (1.0, 3.0):
        data = gen_dataset(SimConfig(n_nodes=80, noise_sd=scale), block_graph, derive_rng(21, "scaled"))
        initial = InitialEstimate(rho_hat0=0.4, beta=true_beta, basis=BasisSpec.correct(), lam=0.0)
        parts.append(sigma_y_hat(untargeted_model(initial, data), data)[0])
    assert parts[1] / parts[0] == pytest.approx(9.0, rel=1e-6)


def test_bootstrap_needs_enough_draws(dataset, policy):
    with pytest.raises(ParameterError):
        sigma_x_bootstrap(constant_model(dataset), dataset, policy, 49, 50, derive_rng(0, "v"))
    with pytest.raises(ParameterError):
        sigma_x_bootstrap(constant_model(dataset), dataset, policy, 50, 10, derive_rng(0, "v"))


def test_bootstrap_of_constant_model_is_zero(dataset, policy):
    assert sigma_x_bootstrap(constant_model(dataset), dataset, policy, 50, 50, derive_rng(1, "v")) == pytest.approx(
        0.0, abs=1e-24
    )


def test_bootstrap_without_covariate_or_treatment_noise(block_graph):
    n = block_graph.n_nodes
    rng = derive_rng(2, "flat")
    data = Dataset.from_arrays(rng.standard_normal(n), rng.integers(0, 2, n), np.ones((n, 2)), block_graph)
    initial = InitialEstimate(
        rho_hat0=0.3, beta=np.linspace(0.1, 0.7, 7), basis=BasisSpec.misspecified(), lam=0.0
    )
    model = untargeted_model(initial, data)
    assert sigma_x_bootstrap(model, data, DeterministicPolicy(1.0), 50, 50, derive_rng(2, "v")) == pytest.approx(
        0.0, abs=1e-24
    )


def test_bootstrap_variance_is_reproducible(dataset, policy, small_bootstrap):
    model = fit_targeted_model(profile_rho(dataset, BasisSpec.misspecified(), lam=0.08), dataset)
    a = estimate_variance(model, dataset, policy, small_bootstrap, derive_rng(3, "v"))
    b = estimate_variance(model, dataset, policy, small_bootstrap, derive_rng(3, "v"))
    assert a == b
    assert a.method == "nested-bootstrap"
    assert (a.n_outer, a.n_inner) == (50, 50)
    assert a.sigma2_x_part > 0.0
    assert a.total == pytest.approx(a.sigma2_y_part + a.sigma2_x_part)


def test_projection_limits(dataset, policy):
    with pytest.raises(ParameterError):
        sigma_x_projection_oracle(constant_model(dataset), dataset, policy, 999, derive_rng(4, "p"))
    big = gen_block(120, 6, 0.3, 0.01, derive_rng(4, "graph"))
    data = gen_dataset(SimConfig(n_nodes=120), big, derive_rng(4, "data"))
    with pytest.raises(ParameterError):
        sigma_x_projection_oracle(constant_model(data), data, policy, 1000, derive_rng(4, "p"))


def test_projection_of_constant_model_is_zero(ring_graph, policy):
    rng = derive_rng(5, "ring")
    data = Dataset.from_arrays(rng.standard_normal(10), rng.integers(0, 2, 10), rng.standard_normal((10, 2)), ring_graph)
    assert sigma_x_projection_oracle(constant_model(data), data, policy, 1000, derive_rng(5, "p")) == pytest.approx(
        0.0, abs=1e-24
    )


def test_confidence_interval_values():
    variance = VarianceEstimate(sigma2_y_part=0.004, sigma2_x_part=0.006)
    lo, hi = confidence_interval(1.0, variance, 0.95)
    assert lo == pytest.approx(0.804, abs=1e-3)
    assert hi == pytest.approx(1.196, abs=1e-3)


def test_confidence_interval_collapses_without_variance():
    assert confidence_interval(2.0, VarianceEstimate(sigma2_y_part=0.0, sigma2_x_part=0.0)) == (2.0, 2.0)


def test_confidence_intervals_nest():
    variance = VarianceEstimate(sigma2_y_part=0.01, sigma2_x_part=0.02)
    lo90, hi90 = confidence_interval(0.0, variance, 0.90)
    lo95, hi95 = confidence_interval(0.0, variance, 0.95)
    assert lo95 < lo90 < hi90 < hi95


@pytest.mark.parametrize("level", [0.0, 1.0, 1.5])
def test_confidence_interval_rejects_bad_level(level):
    with pytest.raises(ParameterError):
        confidence_interval(0.0, VarianceEstimate(sigma2_y_part=1.0, sigma2_x_part=0.0), level)


def test_efficiency_oracle_limits(policy):
    big = gen_block(61, 3, 0.3, 0.01, derive_rng(6, "graph"))
    with pytest.raises(ParameterError):
        hg_efficiency_oracle(SimConfig(n_nodes=61), big, policy, 500, derive_rng(6, "hg"))
    small = gen_block(30, 3, 0.3, 0.01, derive_rng(6, "graph"))
    with pytest.raises(ParameterError):
        hg_efficiency_oracle(SimConfig(n_nodes=30), small, policy, 499, derive_rng(6, "hg"))


def test_efficiency_oracle_with_constant_outcome(ring_graph, policy):
    config = SimConfig(n_nodes=10, g=FLAT_G)
    var_h, var_g = hg_efficiency_oracle(config, ring_graph, policy, 500, derive_rng(7, "hg"), n_inner=5)
    assert var_h == pytest.approx(0.0, abs=1e-24)
    assert var_g == pytest.approx(0.0, abs=1e-24)


@pytest.mark.slow
def test_bootstrap_agrees_with_projection(policy):
    graph = gen_block(50, 3, 0.3, 0.3 / 50, derive_rng(8, "graph"))
    data = gen_dataset(SimConfig(n_nodes=50), graph, derive_rng(8, "data"))
    model = fit_targeted_model(profile_rho(data, BasisSpec.correct(), lam=0.05), data)
    boot = sigma_x_bootstrap(model, data, policy, 500, 500, derive_rng(8, "boot"))
    projection = sigma_x_projection_oracle(model, data, policy, 2000, derive_rng(8, "proj"))
    assert boot == pytest.approx(projection, rel=0.2)


@pytest.mark.slow
def test_projection_statistic_is_no_less_efficient(policy):
    graph = gen_block(40, 2, 0.3, 0.3 / 40, derive_rng(9, "graph"))
    var_h, var_g = hg_efficiency_oracle(SimConfig(n_nodes=40), graph, policy, 2000, derive_rng(9, "hg"))
    assert var_h <= 1.1 * var_g


def full_network_h(points, draws, uniforms, graph, policy, config):
    """``h`` by recomputing every summary of the whole network for each point."""
    n = graph.n_nodes
    weights = omega(row_normalize(graph), config.rho0, config.delta_rho)
    two_hop = neighborhoods(graph).two_hop
    h = np.zeros(points.shape[0])
    for k in range(n):
        for row, point in enumerate(points):
            x = draws.copy()
            x[:, k, :] = point
            c = summarize_x(x, graph)
            v = summarize_z(policy.assign(c, uniforms), graph)
            g = true_g(v, c, config.g)[:, two_hop[k]]
            h[row] += g.mean(axis=0) @ weights[two_hop[k]]
    return h / n


@pytest.mark.parametrize(
    "policy",
    [
        StochasticPolicy(pi_star=0.6),
        StochasticPolicy(intercept=-0.2, coefficients=[0.8, -0.5, 0.4, 0.3]),
        ThresholdPolicy(feature=2, quantile=0.5, cutoff=0.1),
        DeterministicPolicy(1.0),
    ],
)
def test_local_projection_update_matches_full_recomputation(policy):
    graph = gen_block(14, 2, 0.4, 0.05, derive_rng(10, "graph"))
    config = SimConfig(n_nodes=14)
    rng = derive_rng(10, "h")
    points = rng.standard_normal((7, 2))
    draws = rng.standard_normal((6, 14, 2))
    uniforms = rng.random((6, 14))
    weights = omega(row_normalize(graph), config.rho0, config.delta_rho)

    def outcome(v, c, nodes):
        return true_g(v, c, config.g)

    fast = _projection_h(points, draws, uniforms, graph, "mean", policy, outcome, weights, chunk_size=3)
    full = full_network_h(points, draws, uniforms, graph, policy, config)
    np.testing.assert_allclose(fast, full, rtol=1e-10, atol=1e-12)
