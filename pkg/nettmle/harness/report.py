"""Report writers: deterministic JSON plus CSV tables."""

import json
from datetime import datetime
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any

import pandas as pd

from ..errors import ConfigError
from ..schema import EstimateResult, MetricsTable, StudyResult

METRICS_COLUMNS = ["method", "bias", "se", "cp", "mean_se", "runtime_s"]
ESTIMATE_COLUMNS = ["policy", "method", "psi_hat", "se", "ci_lo", "ci_hi", "rho_hat0", "t_star", "contrast", "error"]
_RUNTIME_KEYS = {"runtime_s"}


def package_versions() -> dict[str, str]:
    out = {}
    for name in ("nettmle", "numpy", "scipy", "networkx", "pandas", "pydantic"):
        try:
            out[name] = version(name)
        except PackageNotFoundError:
            out[name] = "unknown"
    return out


def strip_runtime(data: Any) -> Any:
    """Drop runtime fields at any depth so the rest of the report is reproducible."""
    if isinstance(data, dict):
        return {k: strip_runtime(v) for k, v in data.items() if k not in _RUNTIME_KEYS}
    if isinstance(data, list):
        return [strip_runtime(v) for v in data]
    return data


def dumps_deterministic(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def metrics_frame(metrics: MetricsTable) -> pd.DataFrame:
    rows = [row.model_dump(include=set(METRICS_COLUMNS)) for row in metrics.rows]
    return pd.DataFrame(rows, columns=METRICS_COLUMNS)


def estimate_frame(result: EstimateResult) -> pd.DataFrame:
    rows = []
    for policy_name, estimate in result.policies.items():
        for method, res in estimate.methods.items():
            rows.append(
                {
                    "policy": policy_name,
                    "method": method,
                    "psi_hat": res.psi_hat,
                    "se": res.se,
                    "ci_lo": res.ci_lo,
                    "ci_hi": res.ci_hi,
                    "rho_hat0": res.rho_hat0,
                    "t_star": res.t_star,
                    "contrast": estimate.contrasts.get(method),
                    "error": res.error,
                }
            )
    return pd.DataFrame(rows, columns=ESTIMATE_COLUMNS)


def _timing(result: StudyResult | EstimateResult) -> dict[str, Any]:
    if isinstance(result, StudyResult):
        per_method = {row.method: row.runtime_s for row in result.metrics.rows}
        per_replication = [
            {"replication": rep.replication, **{m: r.runtime_s for m, r in rep.methods.items()}}
            for rep in result.replications
        ]
        return {"mean_runtime_s": per_method, "replications": per_replication}
    return {
        name: {m: r.runtime_s for m, r in estimate.methods.items()} for name, estimate in result.policies.items()
    }


def write_report(result: StudyResult | EstimateResult, out_dir: str | Path) -> list[Path]:
    """Write a study or estimate report into ``out_dir``.

    Studies produce ``report.json``, ``metrics.csv`` and ``timing.json``; estimates produce
    ``estimate.json``, ``estimate.csv`` and ``timing.json``. The JSON file excludes
    runtimes and is byte-identical for identical inputs; runtimes go to the CSV and
    ``timing.json``.

    Raises:
        ConfigError: ``out_dir`` cannot be created or written
    """
    out_dir = Path(out_dir).expanduser()
    stem = "report" if isinstance(result, StudyResult) else "estimate"
    json_path = out_dir / f"{stem}.json"
    csv_path = out_dir / ("metrics.csv" if isinstance(result, StudyResult) else "estimate.csv")
    timing_path = out_dir / "timing.json"

    payload = strip_runtime(result.model_dump(mode="json"))
    frame = metrics_frame(result.metrics) if isinstance(result, StudyResult) else estimate_frame(result)
    timing = {"written_at": datetime.now().isoformat(timespec="seconds"), "runtimes": _timing(result)}

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path.write_text(dumps_deterministic(payload), encoding="utf-8")
        frame.to_csv(csv_path, index=False, float_format="%.10g")
        timing_path.write_text(dumps_deterministic(timing), encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot write report to {out_dir}: {e}") from e
    return [json_path, csv_path, timing_path]


def read_report(path: str | Path) -> StudyResult | EstimateResult:
    """Parse a ``report.json`` or ``estimate.json`` back into its result model."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    model = StudyResult if "metrics" in data else EstimateResult
    return model.model_validate(data)
