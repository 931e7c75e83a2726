"""
Runs of the built-in scenarios. On dataset-length series the fitted
correlation time of a single telegraph process must come out as
`1 / (2 gamma)`, which one realisation cannot show reliably: its fit errors
come from the residuals of one curve and understate the scatter between
realisations. So the Allan variance is averaged over many seeded runs, the
mean curve is fitted, and the standard error comes from fits of batch means.
The three-defect configurations must show time-dependent T1 dips near the
defects.
"""

import time
from typing import List, Tuple

import numpy as np
import pytest

from tlsnoise.analysis import (
    AllanCurve,
    TimeSeries,
    allan_deviation,
    analysis_report,
    fit_allan_model,
)
from tlsnoise.dynamics import run_scenario
from tlsnoise.options import AnalysisConfig, ChartConfig
from tlsnoise.random_streams import RandomStream
from tlsnoise.scenarios import load_scenario

HOUR = 3600.0
BARE_T1 = 27e-6
LONG_RUN = ChartConfig(dt=100.0, t_obs=300 * HOUR)
REALISATIONS = 400
BATCHES = 10


def _column_series(name: str, seed: int) -> TimeSeries:
    scenario = load_scenario(name)
    chart, _ = run_scenario(
        scenario.defects, scenario.chart_config(LONG_RUN), RandomStream(seed)
    )
    assert chart.shape[1] == 1
    return TimeSeries(chart.t1[:, 0], chart.times[1] - chart.times[0])


def _dataset_variances(name: str, seed: int) -> Tuple[AllanCurve, np.ndarray]:
    """
    Allan variances of independent runs with the default chart timing
    (one value every 1000 s for 47.2 h), one row per run.
    """
    scenario = load_scenario(name)
    cfg = scenario.chart_config(ChartConfig())
    root = RandomStream(seed)
    curves = []
    for k in range(REALISATIONS):
        chart, _ = run_scenario(scenario.defects, cfg, root.child(k))
        curves.append(allan_deviation(TimeSeries(chart.t1[:, 0], cfg.dt)))
    return curves[0], np.array([curve.variance for curve in curves])


def _inverse_tau0(template: AllanCurve, variances: np.ndarray) -> float:
    mean_curve = AllanCurve(
        taus=template.taus,
        sigma=np.sqrt(np.mean(variances, axis=0)),
        counts=template.counts,
    )
    return 1 / fit_allan_model(mean_curve).tau0


def _batch_estimates(
    template: AllanCurve, variances: np.ndarray
) -> Tuple[float, float]:
    """
    Inverse correlation time of the mean curve and its standard error.
    """
    batches: List[float] = [
        _inverse_tau0(template, batch)
        for batch in np.array_split(variances, BATCHES)
    ]
    standard_error = float(np.std(batches, ddof=1)) / np.sqrt(BATCHES)
    return _inverse_tau0(template, variances), standard_error


def test_single_telegraph_process_gives_its_correlation_time():
    acceptable_time_in_seconds = 60.0

    start_time = time.time()
    template, variances = _dataset_variances("single-rts", seed=0)
    inverse_tau0, standard_error = _batch_estimates(template, variances)
    assert time.time() - start_time < acceptable_time_in_seconds

    # Switching rate of 100 uHz, so 1 / tau0 = 200 uHz
    assert abs(inverse_tau0 - 200e-6) < 3 * standard_error


def test_both_estimators_see_the_same_process():
    ts = _column_series("single-rts", seed=1)
    report = analysis_report(ts, AnalysisConfig(welch_segment=100 * HOUR))
    assert report.allan_fit is not None
    assert report.psd_fit is not None
    assert 100e-6 < 1 / report.psd_fit.tau0 < 400e-6


def test_four_telegraph_processes():
    acceptable_time_in_seconds = 60.0

    start_time = time.time()
    template, variances = _dataset_variances("four-rts", seed=0)
    inverse_tau0 = _inverse_tau0(template, variances)
    assert time.time() - start_time < acceptable_time_in_seconds

    assert 150e-6 <= inverse_tau0 <= 250e-6


@pytest.mark.parametrize("name", ["three-defects-g50", "three-defects-g100"])
def test_three_defects_give_moving_dips(name):
    scenario = load_scenario(name)
    cfg = scenario.chart_config(ChartConfig(noise_sigma=0.0))
    chart, traces = run_scenario(scenario.defects, cfg, RandomStream(0))

    assert chart.shape == (170, 41)
    assert len(traces) == 3
    assert np.all(chart.t1 <= BARE_T1 * (1 + 1e-12))
    assert chart.t1.min() < 0.9 * BARE_T1
    # The defect at 4.510 GHz moves, so its column changes over time
    column = chart.column(4.510e9)
    assert column.max() > column.min()
    # Far from every defect the qubit stays close to its bare T1
    assert chart.column(4.520e9).min() > 0.8 * BARE_T1


def test_stronger_coupling_gives_deeper_dips():
    depths = []
    for name in ["three-defects-g50", "three-defects-g100"]:
        scenario = load_scenario(name)
        cfg = scenario.chart_config(ChartConfig(noise_sigma=0.0))
        chart, _ = run_scenario(scenario.defects, cfg, RandomStream(0))
        depths.append(chart.t1.min())
    assert depths[1] < depths[0]


def test_runs_are_reproducible():
    first = _column_series("four-rts", seed=5)
    second = _column_series("four-rts", seed=5)
    np.testing.assert_array_equal(first.values, second.values)


def test_diffusive_defect_stays_inside_its_band():
    scenario = load_scenario("three-defects-g100")
    _, traces = run_scenario(
        scenario.defects, scenario.chart_config(LONG_RUN), RandomStream(2)
    )
    bound = sum(abs(t.delta_f) for t in scenario.defects.qtls[0].ttls_set)
    assert bound == pytest.approx(4.4e6)
    assert np.all(np.abs(traces[0].excursion) <= bound * (1 + 1e-9))


def test_telegraphic_defect_dwells_in_two_bands():
    scenario = load_scenario("three-defects-g100")
    _, traces = run_scenario(
        scenario.defects, scenario.chart_config(LONG_RUN), RandomStream(2)
    )
    dominant = max(abs(t.delta_f) for t in scenario.defects.qtls[1].ttls_set)
    excursion = traces[1].excursion
    upper = np.abs(excursion - dominant) <= 0.3e6 + 1.0
    lower = np.abs(excursion + dominant) <= 0.3e6 + 1.0
    assert np.mean(upper | lower) > 0.8
    assert upper.any() and lower.any()
