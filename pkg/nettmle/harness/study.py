"""Monte Carlo study runner and metrics."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..config import NetworkSpec, SimConfig, StudyConfig
from ..errors import ConfigError
from ..estimators import BasisSpec, EstimatorSettings, get_estimator
from ..graph import AdjacencyGraph, gen_block, gen_powerlaw, load_edge_list
from ..rng import derive_rng
from ..schema import MetricsRow, MetricsTable, ReplicationResult, StudyResult
from ..sem import (
    InterventionPolicy,
    ThresholdPolicy,
    build_policy,
    calibrate_policy,
    draw_summaries,
    gen_dataset,
    oracle_psi,
)
from .report import package_versions

logger = logging.getLogger(__name__)

NOISY_TRUTH_RATIO = 0.10
POLICY_CALIBRATION_DRAWS = 200


def build_network(spec: NetworkSpec, sim: SimConfig, rng: np.random.Generator) -> AdjacencyGraph:
    """Generate (or load) the study network."""
    n = sim.n_nodes
    if spec.kind == "block":
        return gen_block(n, spec.resolved_blocks(n), spec.p_in, spec.resolved_p_out(n), rng)
    if spec.kind == "powerlaw":
        return gen_powerlaw(n, spec.m_attach, rng)
    graph = load_edge_list(spec.edges_path)
    if graph.n_nodes != n:
        raise ConfigError(f"{spec.edges_path} has {graph.n_nodes} nodes but sim.n_nodes is {n}")
    return graph


def network_for(config: StudyConfig, replication: int) -> AdjacencyGraph:
    """Network of replication ``r``: one shared draw when ``network.fixed``, else one per r."""
    keys = ("network",) if config.network.fixed else ("network", replication)
    return build_network(config.network, config.sim, derive_rng(config.seed, *keys))


def policy_for(config: StudyConfig, graph: AdjacencyGraph, replication: int) -> InterventionPolicy:
    """Study policy on ``graph``, with any threshold cutoff frozen from the covariate law.

    The calibration sample comes from ``(seed, "policy"[, r])``, keyed like the network, so
    the oracle and every method of a replication see the same cutoff.
    """
    keys = ("policy",) if config.network.fixed else ("policy", replication)
    policy = build_policy(config.policy)
    if isinstance(policy, ThresholdPolicy) and policy.cutoff is None:
        sample = draw_summaries(config.sim, graph, POLICY_CALIBRATION_DRAWS, derive_rng(config.seed, *keys))
        policy = calibrate_policy(policy, sample)
    return policy


def estimator_settings(config: StudyConfig, method: str) -> EstimatorSettings:
    return EstimatorSettings(
        basis=BasisSpec.from_name(config.basis_for(method)),
        initial=config.initial,
        bootstrap=config.bootstrap,
        kde=config.kde,
        level=config.level,
        delta_rho=config.sim.delta_rho,
    )


def compute_truth(config: StudyConfig, graph: AdjacencyGraph | None = None, replication: int | None = None):
    """Oracle ``(psi_true, mc_se)`` on the study network, from the stream ``(seed, "oracle"[, r])``."""
    graph = graph if graph is not None else network_for(config, replication or 0)
    keys = ("oracle",) if replication is None else ("oracle", replication)
    policy = policy_for(config, graph, replication or 0)
    return oracle_psi(config.sim, graph, policy, config.oracle_n_mc, derive_rng(config.seed, *keys))


def run_replication(config: StudyConfig, replication: int) -> ReplicationResult:
    """Simulate dataset ``r`` and run every enabled method on it.

    The data come from the stream ``(seed, "data", r)`` and method ``m`` uses
    ``(seed, m, r)``, so the result depends only on ``(config, r)``. A method that raises a
    library error is recorded as failed without stopping the others.
    """
    graph = network_for(config, replication)
    dataset = gen_dataset(config.sim, graph, derive_rng(config.seed, "data", replication))
    policy = policy_for(config, graph, replication)

    result = ReplicationResult(replication=replication)
    for method in config.methods:
        estimator = get_estimator(method)
        rng = derive_rng(config.seed, method, replication)
        result.methods[method] = estimator.run(dataset, policy, estimator_settings(config, method), rng)

    if not config.network.fixed:
        result.psi_true, result.psi_true_mc_se = compute_truth(config, graph, replication)
    return result


def _replication_truths(replications: list[ReplicationResult], psi_true: float) -> np.ndarray:
    return np.array([psi_true if rep.psi_true is None else rep.psi_true for rep in replications])


def compute_metrics(
    replications: list[ReplicationResult],
    methods: list[str],
    psi_true: float,
    psi_true_mc_se: float,
) -> MetricsTable:
    """Bias, empirical SE (divisor R), coverage and mean estimated SE per method.

    Coverage uses the intervals stored in the results. When replications carry their own
    truth (network redrawn per replication), bias and coverage are measured against it.
    """
    table = MetricsTable(psi_true=psi_true, psi_true_mc_se=psi_true_mc_se)
    truths = _replication_truths(replications, psi_true)
    for method in methods:
        results = [rep.methods.get(method) for rep in replications]
        ok = [(res, truth) for res, truth in zip(results, truths) if res is not None and res.ok]
        row = MetricsRow(method=method, n_ok=len(ok), n_failed=len(results) - len(ok))
        if ok:
            estimates = np.array([res.psi_hat for res, _ in ok])
            targets = np.array([truth for _, truth in ok])
            row.bias = float(np.mean(estimates - targets))
            row.se = float(np.sqrt(np.mean((estimates - estimates.mean()) ** 2)))
            intervals = [(res.ci_lo, res.ci_hi, truth) for res, truth in ok if res.ci_lo is not None]
            if intervals:
                row.cp = float(np.mean([lo <= truth <= hi for lo, hi, truth in intervals]))
            ses = [res.se for res, _ in ok if res.se is not None]
            row.mean_se = float(np.mean(ses)) if ses else None
            row.runtime_s = float(np.mean([res.runtime_s for res, _ in ok]))
            if row.se > 0.0 and psi_true_mc_se > NOISY_TRUTH_RATIO * row.se:
                message = (
                    f"{method}: oracle MC SE {psi_true_mc_se:.2e} exceeds {NOISY_TRUTH_RATIO:.0%} of the "
                    f"empirical SE {row.se:.2e}; increase oracle_n_mc"
                )
                logger.warning(message)
                table.warnings.append(message)
        if row.n_failed:
            table.warnings.append(f"{method}: {row.n_failed} of {len(results)} replications failed")
        table.rows.append(row)
    return table


def run_study(config: StudyConfig, workers: int | None = None, run_logger=None) -> StudyResult:
    """Run all replications, compute the oracle truth and aggregate the metrics.

    Replications run in a process pool when ``workers > 1``; results are sorted by
    replication index before aggregation.
    """
    workers = workers or config.workers
    indices = range(config.replications)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            replications = list(pool.map(run_replication, [config] * len(indices), indices))
    else:
        replications = [run_replication(config, r) for r in indices]
    replications.sort(key=lambda rep: rep.replication)

    if run_logger is not None:
        for rep in replications:
            run_logger.log_replication(rep)

    if config.network.fixed:
        psi_true, mc_se = compute_truth(config)
    else:
        truths = np.array([rep.psi_true for rep in replications])
        psi_true = float(truths.mean())
        mc_se = float(math.sqrt(np.mean([rep.psi_true_mc_se**2 for rep in replications])))

    metrics = compute_metrics(replications, config.methods, psi_true, mc_se)
    if run_logger is not None:
        run_logger.log_metrics(metrics)
    return StudyResult(
        config=config.model_dump(mode="json"),
        metrics=metrics,
        replications=replications,
        versions=package_versions(),
    )
