# Shortcuts, such that users can write `from tlsnoise import compute_chart`
# instead of `from tlsnoise.dynamics import compute_chart`.
from tlsnoise.analysis import (
    allan_deviation,
    fit_allan_model,
    fit_psd_model,
    welch_psd,
)
from tlsnoise.dynamics import compute_chart, run_scenario
from tlsnoise.ensemble import generate_qtls_ensemble
from tlsnoise.render import chart_to_string, plot, plot_to_string

__all__ = [
    "allan_deviation",
    "chart_to_string",
    "compute_chart",
    "fit_allan_model",
    "fit_psd_model",
    "generate_qtls_ensemble",
    "plot",
    "plot_to_string",
    "run_scenario",
    "welch_psd",
]
