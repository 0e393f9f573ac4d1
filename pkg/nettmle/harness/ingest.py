"""Real-data ingestion: node CSV + edge CSV -> Dataset."""

import logging
import re
from pathlib import Path

import numpy as np
import pandas as pd

from ..config import IngestSchema
from ..errors import DataError
from ..graph import build_graph
from ..schema import IngestReport
from ..sem import Dataset

logger = logging.getLogger(__name__)

_X_COLUMN = re.compile(r"^x(\d+)$")


def _read_csv(path: str | Path, what: str) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{what} file does not exist: {path}")
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"{path}: cannot parse {what} CSV: {e}") from e


def _numeric_column(frame: pd.DataFrame, column: str, path: Path) -> np.ndarray:
    """Parse one column as finite floats; the first bad cell is reported with its file line."""
    values = pd.to_numeric(frame[column].str.strip(), errors="coerce").to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        kind = "missing or non-numeric" if np.isnan(values[row]) else "infinite"
        raise DataError(
            f"{path}: {kind} value {frame[column].iloc[row]!r} in column '{column}' at line {row + 2}"
        )
    return values


def resolve_x_columns(columns: list[str], schema: IngestSchema) -> list[str]:
    """Explicit ``x_columns``, or every ``x<k>`` column ordered by ``k``."""
    if schema.x_columns is not None:
        return list(schema.x_columns)
    found = sorted((int(m.group(1)), c) for c in columns if (m := _X_COLUMN.match(c)))
    return [c for _, c in found]


def ingest_dataset(
    data_csv: str | Path,
    edges_csv: str | Path,
    schema: IngestSchema | None = None,
) -> tuple[Dataset, IngestReport, list[str]]:
    """Load node attributes and an edge list into a :class:`Dataset`.

    Node ids in the edge list refer to the id column of the data CSV and are mapped to
    contiguous indices in data order. Nodes without edges are dropped and reported.

    Returns:
        ``(dataset, report, node_ids)`` with ``node_ids[k]`` the original id of node ``k``

    Raises:
        DataError: missing file or column, non-numeric cell, duplicate or unknown id,
            too few usable nodes
    """
    schema = schema or IngestSchema()
    data_csv, edges_csv = Path(data_csv), Path(edges_csv)
    frame = _read_csv(data_csv, "data")
    x_columns = resolve_x_columns(list(frame.columns), schema)
    if not x_columns:
        raise DataError(f"{data_csv}: no covariate columns (expected x1, x2, ... or ingest.x_columns)")

    required = [schema.id_column, schema.y_column, schema.z_column, *x_columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise DataError(f"{data_csv}: missing column(s) {missing}; found {list(frame.columns)}")

    ids = frame[schema.id_column].str.strip().tolist()
    duplicated = frame[schema.id_column].str.strip().duplicated()
    if duplicated.any():
        row = int(np.flatnonzero(duplicated.to_numpy())[0])
        raise DataError(f"{data_csv}: duplicate id {ids[row]!r} at line {row + 2}")
    index = {node_id: k for k, node_id in enumerate(ids)}

    y = _numeric_column(frame, schema.y_column, data_csv)
    z = _numeric_column(frame, schema.z_column, data_csv)
    x = np.column_stack([_numeric_column(frame, c, data_csv) for c in x_columns])

    edges = _read_csv(edges_csv, "edge")
    if not {"i", "j"} <= set(edges.columns):
        raise DataError(f"{edges_csv}: edge list needs columns 'i' and 'j', found {list(edges.columns)}")
    pairs = np.empty((len(edges), 2), dtype=np.int64)
    for row, (i, j) in enumerate(zip(edges["i"].str.strip(), edges["j"].str.strip())):
        for col, node_id in enumerate((i, j)):
            if node_id not in index:
                raise DataError(f"{edges_csv}: line {row + 2}, column '{'ij'[col]}': id {node_id!r} not in {data_csv.name}")
        pairs[row] = index[i], index[j]

    degree = np.bincount(pairs.ravel(), minlength=len(ids)) if len(pairs) else np.zeros(len(ids), dtype=int)
    keep = np.flatnonzero(degree > 0)
    dropped = [ids[k] for k in np.flatnonzero(degree == 0)]
    if dropped:
        logger.warning(f"Dropped {len(dropped)} isolated node(s) from {data_csv.name}")
    if keep.size < 2:
        raise DataError(f"{data_csv}: fewer than two connected nodes")

    remap = np.full(len(ids), -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    graph = build_graph(remap[pairs], keep.size)
    y, z, x = y[keep], z[keep], x[keep]

    log_transformed = []
    for column in schema.log_transform:
        if column == schema.y_column:
            target = y
        elif column in x_columns:
            target = x[:, x_columns.index(column)]
        else:
            raise DataError(f"log_transform column '{column}' is neither the outcome nor a covariate")
        if np.any(target <= -1.0):
            raise DataError(f"log_transform column '{column}' has values <= -1")
        target[:] = np.log1p(target)
        log_transformed.append(column)

    if schema.standardize:
        sd = x.std(axis=0)
        flat = [c for c, s in zip(x_columns, sd) if s == 0.0]
        if flat:
            logger.warning(f"Constant covariate(s) {flat} are centred but not scaled")
        x = (x - x.mean(axis=0)) / np.where(sd > 0.0, sd, 1.0)

    dataset = Dataset.from_arrays(y, z, x, graph, schema.summary)
    report = IngestReport(
        n_rows=len(ids),
        n_nodes=keep.size,
        n_edges=graph.n_edges,
        dropped_isolated=dropped,
        x_columns=x_columns,
        log_transformed=log_transformed,
        standardized=schema.standardize,
    )
    return dataset, report, [ids[k] for k in keep]
