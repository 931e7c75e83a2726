"""
T1 series usually arrive as NumPy arrays, so the analysis and the plots must
take them as they are. Thus these tests.
"""

import numpy as np

from tlsnoise import allan_deviation, plot, welch_psd
from tlsnoise.analysis import as_time_series


def test_normal_plotting():
    xs = np.arange(1, 100)
    ys = np.sin(xs) - 35.7
    plot(xs=xs, ys=ys, title="Simple NumPy test")


def test_float32_series():
    values = np.random.default_rng(2).normal(27e-6, 1e-6, 5000).astype(np.float32)
    ts = as_time_series(values, dt=60.0)
    assert ts.values.dtype == np.float64
    assert len(allan_deviation(ts).taus) > 10
    assert len(welch_psd(ts, segment=500 * 60.0).freqs) == 250
