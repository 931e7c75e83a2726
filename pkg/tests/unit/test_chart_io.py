import numpy as np
import pytest

from tlsnoise.analysis import TimeSeries
from tlsnoise.chart_io import (
    config_digest,
    load_chart,
    load_metadata,
    load_series,
    save_chart,
    save_frequency_traces,
    save_metadata,
    save_series,
)
from tlsnoise.dynamics import FrequencyTrace, SpectrotemporalChart
from tlsnoise.errors import SchemaError
from tlsnoise.options import ChartConfig, RunConfig


def _chart() -> SpectrotemporalChart:
    rng = np.random.default_rng(8)
    return SpectrotemporalChart(
        t1=rng.uniform(5e-6, 30e-6, (20, 3)),
        times=1000.0 * np.arange(20),
        frequencies=np.array([4.50e9, 4.52e9, 4.54e9]),
        seed=11,
        clamped=[(2, 1)],
        metadata={"config_digest": "cafe"},
    )


#######################
# Testing: chart file #
#######################


def test_chart_reads_back_bit_exactly(tmp_path):
    chart = _chart()
    path = str(tmp_path / "chart.txt")
    save_chart(path, chart)
    loaded = load_chart(path)
    np.testing.assert_array_equal(loaded.t1, chart.t1)
    np.testing.assert_array_equal(loaded.times, chart.times)
    np.testing.assert_array_equal(loaded.frequencies, chart.frequencies)


def test_chart_header_names_seed_and_digest(tmp_path):
    path = tmp_path / "chart.txt"
    save_chart(str(path), _chart())
    assert path.read_text().splitlines()[0] == "# seed=11 config_digest=cafe"


def test_load_chart_rejects_series(tmp_path):
    path = str(tmp_path / "series.txt")
    save_series(path, TimeSeries(np.ones(20), 60.0))
    with pytest.raises(SchemaError):
        load_chart(path)


def test_empty_and_broken_files(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(SchemaError, match="empty"):
        load_chart(str(empty))
    broken = tmp_path / "broken.txt"
    broken.write_text("1 2\n3 four\n")
    with pytest.raises(SchemaError, match="Cannot parse"):
        load_series(str(broken))


##########################
# Testing: metadata file #
##########################


def test_metadata(tmp_path):
    path = str(tmp_path / "meta.json")
    save_metadata(path, _chart(), note="extra")
    metadata = load_metadata(path)
    assert metadata["seed"] == 11
    assert metadata["shape"] == [20, 3]
    assert metadata["clamped_cells"] == [[2, 1]]
    assert metadata["config_digest"] == "cafe"
    assert metadata["note"] == "extra"


def test_broken_metadata(tmp_path):
    path = tmp_path / "meta.json"
    path.write_text("{")
    with pytest.raises(SchemaError):
        load_metadata(str(path))


###########################
# Testing: frequency file #
###########################


def test_frequency_traces(tmp_path):
    times = 10.0 * np.arange(5)
    traces = [
        FrequencyTrace(times=times, f=np.full(5, 4.51e9), f0=4.51e9),
        FrequencyTrace(times=times, f=np.linspace(4.52e9, 4.53e9, 5), f0=4.52e9),
    ]
    path = tmp_path / "traces.txt"
    save_frequency_traces(str(path), traces)
    assert path.read_text().splitlines()[0] == "# t_s f0_hz f1_hz"
    matrix = np.loadtxt(str(path))
    assert matrix.shape == (5, 3)
    np.testing.assert_array_equal(matrix[:, 2], traces[1].f)

    with pytest.raises(SchemaError):
        save_frequency_traces(str(path), [])


########################
# Testing: load_series #
########################


def test_series_reads_back(tmp_path):
    ts = TimeSeries(np.random.default_rng(1).normal(size=50), 60.0)
    path = str(tmp_path / "series.txt")
    save_series(path, ts)
    loaded = load_series(path)
    np.testing.assert_array_equal(loaded.values, ts.values)
    assert loaded.dt == 60.0


def test_series_from_chart_column(tmp_path):
    chart = _chart()
    path = str(tmp_path / "chart.txt")
    save_chart(path, chart)
    np.testing.assert_array_equal(load_series(path).values, chart.t1[:, 0])
    column = load_series(path, column=2)
    np.testing.assert_array_equal(column.values, chart.t1[:, 2])
    assert column.dt == 1000.0
    with pytest.raises(SchemaError, match="out of range"):
        load_series(path, column=3)


def test_series_file_errors(tmp_path):
    three = tmp_path / "three.txt"
    three.write_text("0 1 2\n1 1 2\n")
    with pytest.raises(SchemaError, match="two columns"):
        load_series(str(three))

    uneven = tmp_path / "uneven.txt"
    uneven.write_text("0 1\n1 1\n3 1\n")
    with pytest.raises(SchemaError, match="uniformly"):
        load_series(str(uneven))

    single = tmp_path / "single.txt"
    single.write_text("0 1\n")
    with pytest.raises(SchemaError, match="single"):
        load_series(str(single))

    series = tmp_path / "series.txt"
    series.write_text("0 1\n1 1\n")
    with pytest.raises(SchemaError, match="chart file"):
        load_series(str(series), column=1)


##########################
# Testing: config_digest #
##########################


def test_digest_ignores_paths_and_workers():
    base = RunConfig()
    moved = RunConfig(out_dir="elsewhere", render=True, chart=ChartConfig(workers=4))
    assert config_digest(base) == config_digest(moved)
    assert len(config_digest(base)) == 64


def test_digest_follows_physics():
    assert config_digest(RunConfig()) != config_digest(RunConfig(seed=1))
    quiet = RunConfig(chart=ChartConfig(noise_sigma=0.0))
    assert config_digest(RunConfig()) != config_digest(quiet)

