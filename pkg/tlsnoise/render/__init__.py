from tlsnoise.render.heatmap import chart_to_string  # noqa: F401
from tlsnoise.render.plotting import plot, plot_to_string  # noqa: F401
