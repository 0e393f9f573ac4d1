"""Monte Carlo studies, real-data ingestion and reporting."""

from .estimate import run_estimate
from .ingest import ingest_dataset
from .report import read_report, write_report
from .study import build_network, compute_metrics, compute_truth, run_replication, run_study

__all__ = [
    "build_network",
    "compute_metrics",
    "compute_truth",
    "ingest_dataset",
    "read_report",
    "run_estimate",
    "run_replication",
    "run_study",
    "write_report",
]
