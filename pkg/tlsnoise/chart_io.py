"""
Text files of charts, frequency traces and series.

A chart file is a matrix whose first row holds the qubit frequencies (Hz) and
whose first column holds the grid times (s); the corner cell is NaN. Values
are written with 17 significant digits so they read back bit-exactly.
"""

import hashlib
import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from tlsnoise.analysis import TimeSeries
from tlsnoise.dynamics import FrequencyTrace, SpectrotemporalChart
from tlsnoise.errors import SchemaError
from tlsnoise.options import RunConfig

_logger = logging.getLogger(__name__)

NUMBER_FORMAT = "%.17g"
METADATA_VERSION = 1


def config_digest(cfg: RunConfig) -> str:
    """
    SHA-256 of the canonical JSON form of everything that determines the
    data artifacts of a run.
    """
    canonical = json.dumps(
        cfg.physics_dict(), sort_keys=True, separators=(",", ":"), default=repr
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def save_chart(path: str, chart: SpectrotemporalChart) -> None:
    """
    The seed and the config digest, when known, go into a comment line.
    """
    header_row = np.concatenate(([np.nan], chart.frequencies))
    body = np.column_stack((chart.times, chart.t1))
    digest = chart.metadata.get("config_digest")
    np.savetxt(
        path,
        np.vstack((header_row, body)),
        fmt=NUMBER_FORMAT,
        header=f"seed={chart.seed} config_digest={digest}",
    )
    _logger.info("Wrote %d x %d chart to %s", *chart.shape, path)


def load_chart(path: str) -> SpectrotemporalChart:
    matrix = _load_matrix(path)
    if matrix.shape[0] < 2 or matrix.shape[1] < 2 or not np.isnan(matrix[0, 0]):
        raise SchemaError(f"{path} is not a chart file")
    return SpectrotemporalChart(
        t1=matrix[1:, 1:], times=matrix[1:, 0], frequencies=matrix[0, 1:]
    )


def save_metadata(path: str, chart: SpectrotemporalChart, **extra: Any) -> None:
    metadata: Dict[str, Any] = {
        "version": METADATA_VERSION,
        "seed": chart.seed,
        "shape": list(chart.shape),
        "clamped_cells": [list(cell) for cell in chart.clamped],
    }
    metadata.update(chart.metadata)
    metadata.update(extra)
    with open(path, "w", encoding="utf-8") as file:
        json.dump(metadata, file, sort_keys=True, indent=1, default=repr)
        file.write("\n")


def load_metadata(path: str) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as file:
        try:
            return json.load(file)
        except json.JSONDecodeError as error:
            raise SchemaError(f"Cannot parse metadata {path}: {error}") from error


def save_frequency_traces(path: str, traces: Sequence[FrequencyTrace]) -> None:
    """
    One column of grid times, then one frequency column per coupled defect.
    """
    if not traces:
        raise SchemaError("No frequency traces to write")
    columns = [traces[0].times] + [trace.f for trace in traces]
    np.savetxt(
        path,
        np.column_stack(columns),
        fmt=NUMBER_FORMAT,
        header="t_s " + " ".join(f"f{k}_hz" for k in range(len(traces))),
    )


def save_series(path: str, ts: TimeSeries) -> None:
    times = ts.dt * np.arange(ts.length)
    np.savetxt(
        path, np.column_stack((times, ts.values)), fmt=NUMBER_FORMAT, header="t_s value"
    )


def load_series(path: str, column: Optional[int] = None) -> TimeSeries:
    """
    A series from a two-column `time value` file, or one column of a chart
    file. Chart columns are counted from 0 and default to the first one.
    """
    matrix = _load_matrix(path)
    if np.isnan(matrix[0, 0]):
        chart = load_chart(path)
        index = 0 if column is None else column
        if not 0 <= index < chart.shape[1]:
            raise SchemaError(
                f"Column {index} out of range, the chart has {chart.shape[1]}"
            )
        return TimeSeries(chart.t1[:, index], _spacing(chart.times, path))
    if matrix.shape[1] != 2:
        raise SchemaError(f"{path} must hold two columns, time and value")
    if column not in (None, 0):
        raise SchemaError("Column selection needs a chart file")
    return TimeSeries(matrix[:, 1], _spacing(matrix[:, 0], path))


###########
# private #
###########


def _load_matrix(path: str) -> np.ndarray:
    try:
        matrix = np.loadtxt(path, ndmin=2)
    except ValueError as error:
        raise SchemaError(f"Cannot parse {path}: {error}") from error
    if matrix.size == 0:
        raise SchemaError(f"{path} is empty")
    return matrix


def _spacing(times: np.ndarray, path: str) -> float:
    steps: List[float] = np.diff(times).tolist()
    if not steps:
        raise SchemaError(f"{path} holds a single time")
    dt = steps[0]
    if dt <= 0 or not np.allclose(steps, dt, rtol=1e-9, atol=0):
        raise SchemaError(f"{path} is not uniformly sampled")
    return float(dt)
