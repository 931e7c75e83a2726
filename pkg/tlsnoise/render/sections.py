from typing import List, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

import tlsnoise.render.glyphs as glyphs
from tlsnoise.render.axis_labels.nice_labels import nice_labels
from tlsnoise.render.curves import CurveSet
from tlsnoise.render.discretizer import cell_index
from tlsnoise.render.options import PlotOptions
from tlsnoise.render.raster import merge_on_top, rasterize

# Gridline glyphs for the top, middle and bottom third of a line
GRIDLINE_THIRDS = ["▔", "─", "▁"]


def header(title: Optional[str], width: int) -> List[str]:
    if title is None:
        return []
    return [glyphs.center(title, width=width + 2)]


def framed_body(
    surface: NDArray,
    y_labels: Sequence[str],
    x_labels: str,
    legend_labels: Optional[List[str]] = None,
) -> List[str]:
    """
    Character surface inside a box, y labels right of it and x labels below.
    """
    width = surface.shape[1]
    lines = [f"┌{'─' * width}┐"]
    for row, label in zip(surface, y_labels):
        lines.append(f"│{''.join(row)}│ {label}".rstrip())
    lines.append(f"└{'─' * width}┘")
    lines.append(x_labels)
    if legend_labels:
        lines.append(glyphs.legend(legend_labels, width=width))
    return lines


def axis_labels(options: PlotOptions):
    """
    Rendered x label line and y label column for the view of `options`.
    """
    y_set = nice_labels(
        options.y_min,
        options.y_max,
        options.height,
        vertical=True,
        unit=options.y_unit,
        log=options.y_as_log,
    )
    x_set = nice_labels(
        options.x_min,
        options.x_max,
        options.width,
        unit=options.x_unit,
        log=options.x_as_log,
    )
    y_labels = y_set.render() if y_set else [""] * options.height
    x_labels = x_set.render()[0] if x_set else ""
    return x_labels, y_labels


def plot_surface(curves: CurveSet, options: PlotOptions) -> NDArray:
    """
    Gridlines with the curves drawn over them.
    """
    layers = [horizontal_gridline(y, options) for y in options.y_gridlines]
    layers += [vertical_gridline(x, options) for x in options.x_gridlines]
    layers.append(curve_layer(curves, options))

    surface = np.full((options.height, options.width), " ", dtype="<U15")
    for layer in layers:
        surface = np.where(layer != "", layer, surface)
    return surface


def curve_layer(curves: CurveSet, options: PlotOptions) -> NDArray:
    scale = 1 if options.force_ascii else 2
    pixels = np.zeros((scale * options.height, scale * options.width), dtype=int)
    for number, (xs, ys) in enumerate(zip(curves.xs, curves.ys), start=1):
        raster = rasterize(
            xs,
            ys,
            options.x_min,
            options.x_max,
            options.y_min,
            options.y_max,
            width=scale * options.width,
            height=scale * options.height,
            lines=options.lines[number - 1],
        )
        pixels = merge_on_top(pixels, number * raster, with_shadow=number > 1)
    if options.force_ascii:
        return glyphs.block_glyphs(pixels, color=options.color)
    return glyphs.quadrant_glyphs(pixels, color=options.color)


def horizontal_gridline(y: float, options: PlotOptions) -> NDArray:
    """
    A line of gridline glyphs at `y`, placed to a third of a line.
    """
    layer = _blank(options)
    if not options.y_min <= y < options.y_max:
        return layer
    if options.force_ascii:
        cell = cell_index(y, options.y_min, options.y_max, options.height)
        layer[options.height - 1 - cell, :] = "─"
        return layer
    cell = cell_index(y, options.y_min, options.y_max, 3 * options.height)
    third = 3 * options.height - 1 - cell
    layer[third // 3, :] = GRIDLINE_THIRDS[third % 3]
    return layer


def vertical_gridline(x: float, options: PlotOptions) -> NDArray:
    layer = _blank(options)
    if options.x_min <= x < options.x_max:
        layer[:, cell_index(x, options.x_min, options.x_max, options.width)] = "│"
    return layer


###########
# private #
###########


def _blank(options: PlotOptions) -> NDArray:
    return np.full((options.height, options.width), "", dtype="<U15")
