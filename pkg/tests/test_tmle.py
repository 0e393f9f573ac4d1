"""Tests for the targeting step and the bootstrap estimate of Psi."""

import dataclasses

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from nettmle.config import SimConfig
from nettmle.errors import NumericalError, ParameterError
from nettmle.estimators import (
    BasisSpec,
    InitialEstimate,
    bootstrap_psi,
    estimate_psi,
    estimate_psi_de,
    fit_targeted_model,
    plug_in_bias,
    profile_rho,
    residualize,
    target_step,
    untargeted_model,
)
from nettmle.graph import build_graph, omega, row_normalize
from nettmle.rng import derive_rng
from nettmle.sem import Dataset, StochasticPolicy, gen_dataset


@pytest.fixture
def policy():
    return StochasticPolicy(pi_star=0.6)


@pytest.fixture
def initial(dataset):
    return profile_rho(dataset, BasisSpec.misspecified(), lam=0.08)


def shifted(initial, k):
    beta = initial.beta.copy()
    beta[0] += k
    return dataclasses.replace(initial, beta=beta)


def test_target_step_formula():
    w = np.array([1.0, 2.0, 3.0])
    r = np.array([2.0, 1.0, 0.0])
    g = np.array([1.0, 1.0, 1.0])
    assert target_step(r, g, w) == pytest.approx((1.0 * 1 + 2.0 * 0 + 3.0 * -1) / 14.0)


def test_target_step_rejects_zero_direction():
    with pytest.raises(NumericalError):
        target_step(np.ones(3), np.zeros(3), np.zeros(3))


def test_residualize(dataset):
    W = row_normalize(dataset.graph)
    np.testing.assert_allclose(residualize(dataset, 0.3), dataset.y - 0.3 * (W.matrix @ dataset.y))


def test_targeting_solves_the_score_equation(dataset, initial):
    model = fit_targeted_model(initial, dataset)
    assert abs(plug_in_bias(model, dataset)) < 1e-10


def test_targeted_model_uses_omega_at_rho_hat(dataset, initial):
    model = fit_targeted_model(initial, dataset)
    np.testing.assert_allclose(model.omega_hat, omega(row_normalize(dataset.graph), initial.rho_hat0))
    assert model.evaluate_i(0, dataset.v[0], dataset.c[0]) == pytest.approx(
        model.evaluate(dataset.v, dataset.c)[0]
    )


def test_constant_outcome_model_gives_closed_form(dataset, policy):
    rho, k = 0.4, 2.5
    initial = InitialEstimate(rho_hat0=rho, beta=np.array([k]), basis=BasisSpec.intercept_only(), lam=0.0)
    estimate = estimate_psi(untargeted_model(initial, dataset), dataset, policy, 20, derive_rng(1, "psi"))
    assert estimate.psi_hat == pytest.approx(k / (1.0 - rho), rel=1e-10)
    np.testing.assert_allclose(estimate.replicates, k / (1.0 - rho), rtol=1e-10)


def test_direct_estimate_shifts_with_outcome_model(dataset, initial, policy):
    k = 0.7
    base = estimate_psi_de(initial, dataset, policy, 50, derive_rng(2, "de"))
    moved = estimate_psi_de(shifted(initial, k), dataset, policy, 50, derive_rng(2, "de"))
    assert moved - base == pytest.approx(k / (1.0 - initial.rho_hat0), rel=1e-8)


def test_targeting_absorbs_outcome_model_shift(dataset, initial, policy):
    k = 0.7
    base = fit_targeted_model(initial, dataset)
    moved = fit_targeted_model(shifted(initial, k), dataset)
    w = base.omega_hat
    assert moved.t_star - base.t_star == pytest.approx(-k * w.sum() / (w @ w), rel=1e-8)

    psi_base = estimate_psi(base, dataset, policy, 50, derive_rng(3, "psi")).psi_hat
    psi_moved = estimate_psi(moved, dataset, policy, 50, derive_rng(3, "psi")).psi_hat
    assert psi_moved == pytest.approx(psi_base, abs=1e-10)


def test_bootstrap_is_deterministic(dataset, initial, policy):
    model = fit_targeted_model(initial, dataset)
    a = bootstrap_psi(model, dataset.x, dataset, policy, 40, root=123)
    b = bootstrap_psi(model, dataset.x, dataset, policy, 40, root=123)
    c = bootstrap_psi(model, dataset.x, dataset, policy, 40, root=124)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_bootstrap_does_not_depend_on_chunking(dataset, initial, policy):
    model = fit_targeted_model(initial, dataset)
    whole = bootstrap_psi(model, dataset.x, dataset, policy, 30, root=5, chunk_size=256)
    chunked = bootstrap_psi(model, dataset.x, dataset, policy, 30, root=5, chunk_size=7)
    np.testing.assert_allclose(whole, chunked, rtol=1e-12)


def test_estimate_is_replicate_mean(dataset, initial, policy):
    model = fit_targeted_model(initial, dataset)
    estimate = estimate_psi(model, dataset, policy, 25, derive_rng(4, "psi"))
    assert estimate.replicates.shape == (25,)
    assert estimate.psi_hat == pytest.approx(estimate.replicates.mean())


def test_estimate_requires_replicates(dataset, initial, policy):
    with pytest.raises(ParameterError):
        estimate_psi(fit_targeted_model(initial, dataset), dataset, policy, 0, derive_rng(0, "psi"))


def test_target_step_minimises_the_squared_loss():
    rng = derive_rng(6, "loss")
    r, g, w = rng.standard_normal(50), rng.standard_normal(50), rng.uniform(0.5, 3.0, 50)
    numeric = minimize_scalar(lambda t: float(np.sum((r - g - t * w) ** 2))).x
    assert target_step(r, g, w) == pytest.approx(numeric, rel=1e-6, abs=1e-8)


def test_estimate_is_invariant_to_ring_rotation(policy):
    n, shift = 60, 17
    ring = build_graph([(i, (i + 1) % n) for i in range(n)], n)
    data = gen_dataset(SimConfig(n_nodes=n), ring, derive_rng(7, "ring"))
    rotated = Dataset.from_arrays(
        np.roll(data.y, shift), np.roll(data.z, shift), np.roll(data.x, shift, axis=0), ring
    )
    np.testing.assert_allclose(rotated.v, np.roll(data.v, shift, axis=0))

    basis = BasisSpec.misspecified()
    model = fit_targeted_model(profile_rho(data, basis, lam=0.06), data)
    moved = fit_targeted_model(profile_rho(rotated, basis, lam=0.06), rotated)
    assert moved.rho_hat0 == pytest.approx(model.rho_hat0, abs=1e-6)
    np.testing.assert_allclose(moved.initial.beta, model.initial.beta, rtol=1e-5, atol=1e-5)
    assert moved.t_star == pytest.approx(model.t_star, abs=1e-5)

    a = estimate_psi(model, data, policy, 1000, derive_rng(7, "psi"))
    b = estimate_psi(moved, rotated, policy, 1000, derive_rng(7, "psi"))
    mc_se = np.sqrt((a.replicates.var() + b.replicates.var()) / 1000)
    assert abs(a.psi_hat - b.psi_hat) <= 5.0 * mc_se
