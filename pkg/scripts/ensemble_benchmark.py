import numpy as np
from time import time

from tlsnoise import compute_chart, plot
from tlsnoise.ensemble import build_ensemble
from tlsnoise.options import ChartConfig, EnsembleConfig
from tlsnoise.random_streams import RandomStream

NOTICEABLE_DELAY_SECONDS = 1.0

densities = [5.0, 10.0, 20.0, 50.0, 100.0, 200.0]
sizes = []
build_times = []
chart_times = []

for density in densities:
    start_time = time()
    ensemble = build_ensemble(EnsembleConfig(density=density), seed=0)
    build_times.append(time() - start_time)
    sizes.append(len(ensemble))

    start_time = time()
    compute_chart(ensemble, ChartConfig(), RandomStream(0))
    chart_times.append(time() - start_time)

print("Benchmarking done.")

print(f"densities = {densities}")
print(f"sizes = {sizes}")
print(f"build_times = {build_times}")
print(f"chart_times = {chart_times}")

plot(
    xs=[np.array(densities), np.array(densities)],
    ys=[build_times, chart_times],
    lines=True,
    title="Defect density versus run time, log-log",
    legend_labels=["ensemble", "chart"],
    x_unit=" /GHz/um3",
    y_unit=" s",
    x_as_log=True,
    y_as_log=True,
    y_gridlines=[NOTICEABLE_DELAY_SECONDS],
)
