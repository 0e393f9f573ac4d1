"""Structural equation model: data, summaries, policies and the Monte Carlo truth."""

from .dataset import Dataset, aggregation_operator, neighbor_aggregate, summarize_x, summarize_z
from .dgp import draw_noise, draw_summaries, gen_dataset, oracle_psi, propensity, true_g
from .policy import (
    DeterministicPolicy,
    InterventionPolicy,
    StochasticPolicy,
    ThresholdPolicy,
    build_policy,
    calibrate_policy,
    sample_intervention,
)

__all__ = [
    "Dataset",
    "DeterministicPolicy",
    "InterventionPolicy",
    "StochasticPolicy",
    "ThresholdPolicy",
    "aggregation_operator",
    "build_policy",
    "calibrate_policy",
    "draw_noise",
    "draw_summaries",
    "gen_dataset",
    "neighbor_aggregate",
    "oracle_psi",
    "propensity",
    "sample_intervention",
    "summarize_x",
    "summarize_z",
    "true_g",
]
