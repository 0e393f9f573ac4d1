"""Tests for summaries, datasets and intervention policies."""

import numpy as np
import pytest
from scipy.special import expit

from nettmle.config import PolicySpec
from nettmle.errors import DataError, ParameterError
from nettmle.rng import derive_rng
from nettmle.sem import (
    Dataset,
    DeterministicPolicy,
    StochasticPolicy,
    ThresholdPolicy,
    build_policy,
    calibrate_policy,
    neighbor_aggregate,
    sample_intervention,
    summarize_x,
    summarize_z,
)


def test_neighbor_mean_and_sum(path_graph):
    values = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(neighbor_aggregate(path_graph, values, "mean"), [2.0, 2.0, 2.0])
    np.testing.assert_allclose(neighbor_aggregate(path_graph, values, "sum"), [2.0, 4.0, 2.0])


def test_unknown_summary(path_graph):
    with pytest.raises(ValueError):
        neighbor_aggregate(path_graph, np.ones(3), "median")


def test_summarize_x_layout(path_graph):
    x = np.array([[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]])
    c = summarize_x(x, path_graph)
    assert c.shape == (3, 4)
    np.testing.assert_allclose(c[1], [2.0, 20.0, 2.0, 20.0])
    np.testing.assert_allclose(c[0], [1.0, 10.0, 2.0, 20.0])


def test_batched_summaries_match_loop(block_graph):
    x = derive_rng(1, "x").standard_normal((5, block_graph.n_nodes, 2))
    batched = summarize_x(x, block_graph)
    for b in range(5):
        np.testing.assert_allclose(batched[b], summarize_x(x[b], block_graph))


def test_summarize_z_shape(block_graph):
    z = np.zeros(block_graph.n_nodes)
    z[0] = 1.0
    v = summarize_z(z, block_graph)
    assert v.shape == (block_graph.n_nodes, 2)
    for j in block_graph.neighbors(0):
        assert v[j, 1] == pytest.approx(1.0 / block_graph.degrees[j])


def test_summarize_x_wrong_rows(path_graph):
    with pytest.raises(DataError):
        summarize_x(np.ones((4, 2)), path_graph)


def test_dataset_from_arrays(path_graph):
    data = Dataset.from_arrays([1.0, 2.0, 3.0], [0, 1, 0], [0.5, 0.1, -0.2], path_graph)
    assert data.n_nodes == 3
    assert data.x_dim == 1
    np.testing.assert_allclose(data.v[:, 1], [1.0, 0.0, 1.0])


def test_dataset_shape_mismatch(path_graph):
    with pytest.raises(DataError):
        Dataset.from_arrays([1.0, 2.0], [0, 1, 0], np.zeros((3, 2)), path_graph)


@pytest.mark.parametrize("pi_star", [0.0, 1.0, -0.1, 1.5])
def test_stochastic_policy_requires_positivity(pi_star):
    with pytest.raises(ParameterError):
        StochasticPolicy(pi_star=pi_star)


def test_stochastic_policy_needs_one_parametrisation():
    with pytest.raises(ParameterError):
        StochasticPolicy()
    with pytest.raises(ParameterError):
        StochasticPolicy(pi_star=0.5, coefficients=[0.1, 0.1])


def test_stochastic_policy_assign_from_uniforms():
    policy = StochasticPolicy(pi_star=0.6)
    c = np.zeros((4, 2))
    np.testing.assert_array_equal(policy.assign(c, np.array([0.1, 0.59, 0.6, 0.9])), [1, 1, 0, 0])


def test_logistic_policy_propensity_and_density():
    policy = StochasticPolicy(intercept=0.2, coefficients=[1.0, -1.0])
    c = np.array([[0.5, 0.0], [0.0, 2.0]])
    expected = expit(0.2 + c @ np.array([1.0, -1.0]))
    np.testing.assert_allclose(policy.propensity(c), expected)
    np.testing.assert_allclose(policy.density(np.array([1.0, 0.0]), c), [expected[0], 1 - expected[1]])


def test_stochastic_policy_sample_frequency(block_graph):
    c = np.zeros((2000, block_graph.n_nodes, 4))
    z = StochasticPolicy(pi_star=0.6).sample(c, derive_rng(2, "z"))
    assert z.mean() == pytest.approx(0.6, abs=0.01)


def test_deterministic_policy():
    policy = DeterministicPolicy(1.0)
    assert not policy.is_stochastic
    np.testing.assert_array_equal(policy.assign(np.zeros((3, 5, 2)), None), np.ones((3, 5)))


def test_threshold_policy_calibrated_top_forty_percent():
    c = np.column_stack([np.arange(1.0, 11.0), np.zeros(10)])
    policy = ThresholdPolicy(feature=0, quantile=0.6).calibrated(c)
    assert policy.cutoff == pytest.approx(6.4)
    np.testing.assert_array_equal(policy.assign(c, np.zeros(10)), [0, 0, 0, 0, 0, 0, 1, 1, 1, 1])


def test_threshold_policy_is_node_wise():
    policy = ThresholdPolicy(feature=0, quantile=0.5, cutoff=0.0)
    c = derive_rng(3, "c").standard_normal((10, 4))
    base = policy.assign(c, np.zeros(10))
    moved = c.copy()
    moved[9, 0] = 1e6
    changed = policy.assign(moved, np.zeros(10))
    np.testing.assert_array_equal(changed[:9], base[:9])
    assert changed[9] == 1.0


def test_threshold_policy_cutoff_is_frozen_after_calibration():
    sample = derive_rng(4, "c").standard_normal((50, 10, 4))
    policy = ThresholdPolicy(feature=1, quantile=0.6).calibrated(sample)
    assert policy.cutoff == pytest.approx(np.quantile(sample[..., 1], 0.6))
    shifted = sample[0] + 100.0
    np.testing.assert_array_equal(policy.assign(shifted, np.zeros(10)), np.ones(10))


def test_threshold_policy_needs_a_cutoff():
    with pytest.raises(ParameterError):
        ThresholdPolicy(feature=0, quantile=0.5).assign(np.zeros((3, 2)), np.zeros(3))


def test_threshold_policy_feature_out_of_range():
    with pytest.raises(ParameterError):
        ThresholdPolicy(feature=5, quantile=0.5, cutoff=0.0).assign(np.zeros((3, 2)), np.zeros(3))


def test_calibrate_policy_passes_other_policies_through():
    policy = StochasticPolicy(pi_star=0.6)
    assert calibrate_policy(policy, np.zeros((3, 4))) is policy
    fixed = ThresholdPolicy(feature=0, quantile=0.5, cutoff=1.5)
    assert calibrate_policy(fixed, np.zeros((3, 4))) is fixed


@pytest.mark.parametrize(
    "spec, kind",
    [
        (PolicySpec(), "stochastic"),
        (PolicySpec(kind="stochastic", intercept=0.0, coefficients=[0.1] * 4), "stochastic"),
        (PolicySpec(kind="deterministic", value=0.0), "deterministic"),
        (PolicySpec(kind="threshold", feature=1), "threshold"),
        (PolicySpec(kind="threshold", feature=1, cutoff=0.2), "threshold"),
    ],
)
def test_build_policy(spec, kind):
    policy = build_policy(spec)
    assert policy.kind == kind
    assert policy.describe()["kind"] == kind


def test_sample_intervention(block_graph):
    c = np.zeros((block_graph.n_nodes, 4))
    z, v = sample_intervention(DeterministicPolicy(1.0), c, block_graph, derive_rng(1, "z"))
    np.testing.assert_array_equal(z, 1.0)
    np.testing.assert_allclose(v, 1.0)
