"""
Shaded text rendering of a spectrotemporal chart. Time runs upward, qubit
frequency to the right, and the densest shade marks the shortest T1.
"""

from typing import List, Optional

import numpy as np
from numpy.typing import NDArray

from tlsnoise.dynamics import SpectrotemporalChart
from tlsnoise.render import glyphs, sections
from tlsnoise.render.axis_labels.nice_labels import nice_labels

HOUR = 3600.0
GHZ = 1e9
US = 1e-6
DEFAULT_WIDTH = 60
DEFAULT_HEIGHT = 24


def chart_to_string(
    chart: SpectrotemporalChart,
    width: Optional[int] = None,
    height: Optional[int] = None,
    title: Optional[str] = None,
) -> List[str]:
    """
    Each character covers a block of chart cells and shows the shortest T1
    among them, so short-lived dips survive the downsampling.
    """
    n_times, n_freqs = chart.shape
    width = min(width or DEFAULT_WIDTH, n_freqs)
    height = min(height or DEFAULT_HEIGHT, n_times)

    pooled = block_minimum(chart.t1, height, width)
    lo, hi = float(np.nanmin(pooled)), float(np.nanmax(pooled))
    levels = (pooled - lo) / (hi - lo) if hi > lo else np.zeros_like(pooled)
    # Latest time on top
    surface = glyphs.shade(levels)[::-1]

    x_labels = _axis_labels(chart.frequencies / GHZ, width, "GHz", vertical=False)
    y_labels = _axis_labels(chart.times / HOUR, height, "h", vertical=True)[::-1]
    lines = sections.header(title, width)
    lines += sections.framed_body(surface, y_labels, x_labels[0])
    lines.append(shade_legend(lo, hi, width))
    return lines


def block_minimum(values: NDArray, rows: int, cols: int) -> NDArray:
    """
    Minimum over a `rows` x `cols` partition of `values` into near-equal
    blocks.
    """
    row_edges = np.linspace(0, values.shape[0], rows + 1).astype(int)[:-1]
    col_edges = np.linspace(0, values.shape[1], cols + 1).astype(int)[:-1]
    pooled = np.minimum.reduceat(values, row_edges, axis=0)
    return np.minimum.reduceat(pooled, col_edges, axis=1)


def shade_legend(lo: float, hi: float, width: int) -> str:
    ramp = "".join(glyphs.SHADES[:-1])
    text = f"T1 {lo / US:.3g} μs {ramp} {hi / US:.3g} μs"
    return glyphs.center(text, width=width + 2)


###########
# private #
###########


def _axis_labels(values: NDArray, space: int, unit: str, vertical: bool) -> List[str]:
    """
    Labels for grid values, with cells placed at the grid points. Rows are
    ordered bottom to top for a vertical axis.
    """
    lo, hi = float(values[0]), float(values[-1])
    if hi == lo:
        blank = [""] * space if vertical else [""]
        if vertical:
            blank[0] = f"{lo:g}{unit}"
            return blank
        return [" " * (space // 2) + f"{lo:g}{unit}"]
    half_cell = 0.5 * (hi - lo) / max(space - 1, 1)
    label_set = nice_labels(
        lo - half_cell, hi + half_cell, space, vertical=vertical, unit=unit
    )
    if label_set is None:
        return [""] * space if vertical else [""]
    rendered = label_set.render()
    # LabelSet puts the top row first
    return rendered[::-1] if vertical else rendered
