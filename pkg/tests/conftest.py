"""Shared fixtures: small graphs and simulated datasets."""

import numpy as np
import pytest

from nettmle.config import BootstrapConfig, SimConfig
from nettmle.graph import build_graph, gen_block
from nettmle.rng import derive_rng
from nettmle.sem import gen_dataset


@pytest.fixture
def path_graph():
    """0 - 1 - 2"""
    return build_graph([(0, 1), (1, 2)], 3)


@pytest.fixture
def ring_graph():
    n = 10
    return build_graph([(i, (i + 1) % n) for i in range(n)], n)


@pytest.fixture
def block_graph():
    return gen_block(80, 4, 0.3, 0.01, derive_rng(11, "graph"))


@pytest.fixture
def sim_config():
    return SimConfig(n_nodes=80)


@pytest.fixture
def dataset(block_graph, sim_config):
    return gen_dataset(sim_config, block_graph, derive_rng(11, "data"))


@pytest.fixture
def noiseless_dataset(block_graph):
    config = SimConfig(n_nodes=80, noise_sd=0.0)
    return gen_dataset(config, block_graph, derive_rng(11, "noiseless"))


@pytest.fixture
def small_bootstrap():
    return BootstrapConfig(n_boot=100, n_outer=50, n_inner=50, chunk_size=64)


@pytest.fixture
def true_beta():
    """Coefficients of the default g0 in the order of the correct basis."""
    return np.array([0.5, 1.0, 0.8, 0.6, -0.4, 0.3, 0.3, 0.5, 0.3, -0.3, 0.2])
