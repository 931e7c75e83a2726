from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from tlsnoise.render.curves import CurveSet

# Fraction of the data range added on each side of an automatic view
VIEW_MARGIN = 0.001


@dataclass
class PlotOptions:
    """
    Options of one text plot. Bounds of the view are stored after any log
    transform, i.e. as log10 values on a log axis.
    """

    # Draw in color, one color per curve
    color: bool = False
    # Use plain block characters instead of 2x2 quadrant glyphs
    force_ascii: bool = False
    # Height of the plotting region, in lines
    height: int = 17
    # One label per curve
    legend_labels: Optional[List[str]] = None
    # Connect consecutive points, per curve
    lines: List[bool] = field(default_factory=lambda: [False])
    title: Optional[str] = None
    # Width of the plotting region, in characters
    width: int = 60
    x_as_log: bool = False
    y_as_log: bool = False
    x_unit: str = ""
    y_unit: str = ""
    # View bounds
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0
    # Positions of gridlines, in data units
    x_gridlines: List[float] = field(default_factory=list)
    y_gridlines: List[float] = field(default_factory=list)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("Plot width and height must be at least 1")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("Empty plot view")


def plot_options(curves: CurveSet, kwargs: Dict[str, Any]) -> PlotOptions:
    """
    Fill in what the caller left out, and bring everything into the form the
    renderer expects. Log axes transform the curves in place.
    """
    kwargs = dict(kwargs)
    for axis in ["x", "y"]:
        if not kwargs.get(f"{axis}_as_log"):
            continue
        curves.to_log10(axis)
        for key in [f"{axis}_min", f"{axis}_max"]:
            if kwargs.get(key) is not None:
                kwargs[key] = float(np.log10(kwargs[key]))
        kwargs[f"{axis}_gridlines"] = [
            float(np.log10(g)) for g in kwargs.get(f"{axis}_gridlines", []) if g > 0
        ]

    for axis in ["x", "y"]:
        lo, hi = curves.bounds(axis)
        margin = VIEW_MARGIN * (hi - lo)
        view_min = kwargs.get(f"{axis}_min")
        view_max = kwargs.get(f"{axis}_max")
        view_min = lo - margin if view_min is None else float(view_min)
        view_max = hi + margin if view_max is None else float(view_max)
        if view_min == view_max:
            view_min, view_max = view_min - 1, view_max + 1
        kwargs[f"{axis}_min"], kwargs[f"{axis}_max"] = view_min, view_max

    for key in ["title", "x_unit", "y_unit"]:
        if kwargs.get(key) is not None:
            kwargs[key] = str(kwargs[key])
    if kwargs.get("legend_labels") is not None:
        kwargs["legend_labels"] = [str(s) for s in kwargs["legend_labels"]][
            : len(curves)
        ]
    kwargs.setdefault("color", len(curves) > 1)

    lines = kwargs.get("lines", False)
    if isinstance(lines, bool):
        kwargs["lines"] = [lines] * len(curves)
    elif len(lines) != len(curves):
        raise ValueError("Option 'lines' needs one entry per curve")

    return PlotOptions(**kwargs)
