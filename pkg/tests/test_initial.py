"""Tests for the ridge fit and the rho profile."""

import logging

import numpy as np
import pytest

from nettmle.config import SimConfig
from nettmle.errors import NumericalError, ParameterError
from nettmle.estimators import BasisSpec, RhoProfile, design_matrix, fit_fixed_rho, profile_rho, ridge_fit
from nettmle.graph import gen_block, row_normalize
from nettmle.rng import derive_rng
from nettmle.sem import Dataset, gen_dataset


def test_ridge_without_penalty_is_least_squares(dataset):
    phi = design_matrix(dataset, BasisSpec.misspecified())
    beta = ridge_fit(phi, dataset.y, lam=0.0)
    expected, *_ = np.linalg.lstsq(phi, dataset.y, rcond=None)
    np.testing.assert_allclose(beta, expected, rtol=1e-8, atol=1e-10)


@pytest.mark.parametrize("standardize", [True, False])
def test_ridge_intercept_is_unpenalised(standardize):
    phi = np.ones((20, 1))
    target = derive_rng(1, "t").standard_normal(20) + 3.0
    beta = ridge_fit(phi, target, lam=100.0, standardize=standardize)
    assert beta[0] == pytest.approx(target.mean())


def test_ridge_shrinks_slopes():
    rng = derive_rng(2, "ridge")
    x = rng.standard_normal(50)
    phi = np.column_stack([np.ones(50), x])
    target = 2.0 * x + rng.standard_normal(50)
    small = ridge_fit(phi, target, lam=0.1)
    large = ridge_fit(phi, target, lam=1e4)
    assert abs(large[1]) < abs(small[1])


def test_zero_variance_column_is_pinned():
    x = derive_rng(3, "x").standard_normal(30)
    phi = np.column_stack([np.ones(30), np.full(30, 2.0), x])
    beta = ridge_fit(phi, 1.0 + x, lam=1e-6)
    assert beta[1] == 0.0
    assert beta[2] == pytest.approx(1.0, rel=1e-4)


def test_collinear_design_without_penalty_is_singular():
    x = derive_rng(4, "x").standard_normal(30)
    phi = np.column_stack([np.ones(30), x, x])
    with pytest.raises(NumericalError):
        ridge_fit(phi, x, lam=0.0)


def test_negative_penalty_rejected():
    with pytest.raises(ParameterError):
        ridge_fit(np.ones((5, 1)), np.ones(5), lam=-1.0)


def test_profile_rss_matches_direct_fit(dataset):
    basis = BasisSpec.misspecified()
    profile = RhoProfile(dataset, basis, lam=0.0)
    W = row_normalize(dataset.graph)
    phi = design_matrix(dataset, basis)
    for rho in (-0.5, 0.0, 0.3, 0.9):
        target = dataset.y - rho * (W.matrix @ dataset.y)
        residual = target - phi @ ridge_fit(phi, target, lam=0.0)
        assert profile.rss(rho) == pytest.approx(residual @ residual, rel=1e-9)


@pytest.mark.parametrize("objective", ["rss", "likelihood"])
def test_noiseless_correct_basis_recovers_rho(noiseless_dataset, objective):
    fit = profile_rho(noiseless_dataset, BasisSpec.correct(), lam=1e-8, objective=objective)
    assert fit.rho_hat0 == pytest.approx(0.4, abs=1e-3)


def test_likelihood_profile_recovers_rho():
    graph = gen_block(400, 20, 0.3, 0.3 / 400, derive_rng(9, "graph"))
    data = gen_dataset(SimConfig(n_nodes=400, noise_sd=0.5), graph, derive_rng(9, "data"))
    fit = profile_rho(data, BasisSpec.correct(), lam=0.4)
    assert fit.rho_hat0 == pytest.approx(0.4, abs=0.1)


def test_flat_profile_returns_zero(block_graph, caplog):
    n = block_graph.n_nodes
    rng = derive_rng(5, "flat")
    data = Dataset.from_arrays(np.ones(n), rng.integers(0, 2, n), rng.standard_normal((n, 2)), block_graph)
    with caplog.at_level(logging.WARNING, logger="nettmle"):
        fit = profile_rho(data, BasisSpec.misspecified(), lam=1e-3)
    assert fit.rho_hat0 == 0.0
    assert "Flat rho profile" in caplog.text


def test_profile_stays_inside_stationarity_region(dataset):
    fit = profile_rho(dataset, BasisSpec.misspecified(), lam=0.08, delta_rho=0.5)
    assert abs(fit.rho_hat0) <= 0.5


def test_profile_rejects_small_samples(path_graph):
    data = Dataset.from_arrays([1.0, 2.0, 3.0], [0, 1, 0], np.zeros((3, 2)), path_graph)
    with pytest.raises(ParameterError):
        profile_rho(data, BasisSpec.misspecified(), lam=1.0)


def test_profile_rejects_unknown_objective(dataset):
    with pytest.raises(ParameterError):
        profile_rho(dataset, BasisSpec.misspecified(), lam=1.0, objective="gmm")


def test_fixed_rho_zero_is_plain_ridge(dataset):
    basis = BasisSpec.misspecified()
    fit = fit_fixed_rho(dataset, basis, lam=0.08)
    assert fit.rho_hat0 == 0.0
    np.testing.assert_allclose(fit.beta, ridge_fit(design_matrix(dataset, basis), dataset.y, 0.08), rtol=1e-10)


def test_fixed_rho_equals_profile_coefficients(dataset):
    basis = BasisSpec.misspecified()
    profile = RhoProfile(dataset, basis, lam=0.08)
    np.testing.assert_array_equal(fit_fixed_rho(dataset, basis, lam=0.08, rho=0.3).beta, profile.coefficients(0.3))


def test_initial_estimate_evaluates_batches(dataset):
    fit = fit_fixed_rho(dataset, BasisSpec.misspecified(), lam=0.08)
    np.testing.assert_allclose(fit.evaluate(dataset.v, dataset.c), design_matrix(dataset, fit.basis) @ fit.beta)
    batch = fit.evaluate(np.stack([dataset.v] * 3), np.stack([dataset.c] * 3))
    assert batch.shape == (3, dataset.n_nodes)


def test_ridge_matches_gradient_descent():
    rng = derive_rng(12, "gd")
    phi = np.column_stack([np.ones(50), rng.standard_normal((50, 3))])
    target = rng.standard_normal(50) + 2.0
    lam = 4.0
    penalty = np.diag([0.0, 1.0, 1.0, 1.0])
    hessian = 2.0 * (phi.T @ phi + lam * penalty)
    step = 1.0 / np.linalg.eigvalsh(hessian).max()
    beta = np.zeros(4)
    for _ in range(5000):
        gradient = -2.0 * phi.T @ (target - phi @ beta) + 2.0 * lam * penalty @ beta
        beta -= step * gradient
    np.testing.assert_allclose(ridge_fit(phi, target, lam, standardize=False), beta, rtol=1e-7, atol=1e-9)


def test_rss_profile_is_minimal_on_a_grid(dataset):
    basis = BasisSpec.misspecified()
    fit = profile_rho(dataset, basis, lam=0.08, objective="rss")
    profile = RhoProfile(dataset, basis, lam=0.08)
    grid = min(profile.rss(rho) for rho in np.linspace(-0.95, 0.95, 381))
    assert profile.rss(fit.rho_hat0) <= grid + 1e-9 * (1.0 + grid)
