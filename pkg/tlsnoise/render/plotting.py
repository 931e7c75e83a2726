from typing import Any, List, Optional

from tlsnoise.render import sections
from tlsnoise.render.curves import CurveSet
from tlsnoise.render.options import PlotOptions, plot_options


def plot(ys: Any, xs: Optional[Any] = None, **kwargs) -> None:
    """
    Scatter or line plot on the terminal.

    - `ys` is one curve or a list of curves, as lists or NumPy arrays.
    - `xs` is optional and shaped like `ys`.
    - Keyword arguments are fields of `tlsnoise.render.options.PlotOptions`.
    """
    for line in plot_to_string(ys, xs, **kwargs):
        print(line)


def plot_to_string(ys: Any, xs: Optional[Any] = None, **kwargs) -> List[str]:
    """
    Same as `plot`, but returns the lines instead of printing them.
    """
    curves = CurveSet(ys=ys, xs=xs)
    options: PlotOptions = plot_options(curves, kwargs)

    x_labels, y_labels = sections.axis_labels(options)
    surface = sections.plot_surface(curves, options)
    return sections.header(options.title, options.width) + sections.framed_body(
        surface, y_labels, x_labels, legend_labels=options.legend_labels
    )
