import json
import logging

import numpy as np
import pytest

from tlsnoise.analysis import TimeSeries
from tlsnoise.chart_io import load_chart, load_metadata, save_series
from tlsnoise.cli import (
    CHART_FILE,
    ENSEMBLE_FILE,
    FIELD_PROFILE_FILE,
    IO_EXIT_CODE,
    METADATA_FILE,
    RENDER_FILE,
    REPORT_FILE,
    TRACES_FILE,
    build_parser,
    main,
)
from tlsnoise.ensemble import Ensemble
from tlsnoise.ensemble_io import ensemble_to_dict, load_ensemble

SMALL = ["--set", "density=5", "--seed", "3"]


@pytest.fixture(autouse=True)
def detach_log_handlers():
    yield
    logger = logging.getLogger("tlsnoise")
    logger.handlers.clear()
    logger.setLevel(logging.NOTSET)


def _run(tmp_path, *args: str) -> int:
    return main(list(args) + ["--out", str(tmp_path), "--quiet"])


#####################
# Testing: generate #
#####################


def test_generate_writes_ensemble_and_field_profile(tmp_path, capsys):
    assert _run(tmp_path, "generate", *SMALL) == 0
    ensemble = load_ensemble(str(tmp_path / ENSEMBLE_FILE))
    assert ensemble.seed == 3
    profile = np.loadtxt(str(tmp_path / FIELD_PROFILE_FILE))
    assert profile.shape[1] == 2
    assert f"n_qtls = {len(ensemble)}" in capsys.readouterr().out


def test_ensemble_file_carries_config_digest(tmp_path):
    _run(tmp_path, "generate", *SMALL)
    data = json.loads((tmp_path / ENSEMBLE_FILE).read_text())
    assert len(data["config_digest"]) == 64


#####################
# Testing: simulate #
#####################


def test_simulate_writes_chart_and_metadata(tmp_path):
    assert _run(tmp_path, "simulate", *SMALL, "--set", "noise_sigma=0") == 0
    chart = load_chart(str(tmp_path / CHART_FILE))
    assert chart.shape == (170, 31)
    metadata = load_metadata(str(tmp_path / METADATA_FILE))
    assert metadata["seed"] == 3
    assert metadata["preset"] == "dataset2"
    assert metadata["overridden_keys"] == ["density", "noise_sigma", "seed"]
    assert 0 < metadata["thermal_excited_population"] < 0.05
    assert "n_qtls" in metadata["ensemble_summary"]


def test_simulate_is_reproducible(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    _run(first, "simulate", *SMALL)
    _run(second, "simulate", *SMALL)
    assert (first / CHART_FILE).read_bytes() == (second / CHART_FILE).read_bytes()
    assert (first / ENSEMBLE_FILE).read_bytes() == (
        second / ENSEMBLE_FILE
    ).read_bytes()


def test_simulate_reuses_an_ensemble(tmp_path):
    _run(tmp_path / "gen", "generate", *SMALL)
    ensemble_path = str(tmp_path / "gen" / ENSEMBLE_FILE)
    assert _run(tmp_path, "simulate", "--ensemble", ensemble_path, "--seed", "3") == 0
    assert not (tmp_path / ENSEMBLE_FILE).exists()
    assert (tmp_path / CHART_FILE).exists()


def test_render_writes_text_plot(tmp_path):
    _run(tmp_path, "simulate", *SMALL, "--preset", "dataset1", "--render")
    render = (tmp_path / RENDER_FILE).read_text()
    assert "┌" in render
    assert "μs" in render


#####################
# Testing: scenario #
#####################


def test_single_column_scenario_writes_report(tmp_path):
    assert _run(tmp_path, "scenario", "--scenario", "single-rts") == 0
    assert load_chart(str(tmp_path / CHART_FILE)).shape == (170, 1)
    report = (tmp_path / REPORT_FILE).read_text().splitlines()
    assert report[0] == "seed = 0"
    assert report[1].startswith("config_digest = ")
    assert (tmp_path / TRACES_FILE).exists()
    assert load_metadata(str(tmp_path / METADATA_FILE))["scenario"] == "single-rts"


def test_sweep_scenario_without_column_has_no_report(tmp_path):
    assert _run(tmp_path, "scenario", "--scenario", "three-defects-g50") == 0
    assert load_chart(str(tmp_path / CHART_FILE)).shape == (170, 41)
    assert not (tmp_path / REPORT_FILE).exists()


def test_scenario_needs_a_scenario(tmp_path):
    assert _run(tmp_path, "scenario") == 2


####################
# Testing: analyze #
####################


def test_analyze_series_file(tmp_path, capsys):
    series = str(tmp_path / "series.txt")
    values = np.random.default_rng(0).normal(27e-6, 1e-6, 400)
    save_series(series, TimeSeries(values, 60.0))
    assert _run(tmp_path, "analyze", "--input", series) == 0
    assert "length = 400" in capsys.readouterr().out
    lines = (tmp_path / REPORT_FILE).read_text().splitlines()
    assert "# tau_s sigma count" in lines


def test_analyze_chart_column(tmp_path):
    _run(tmp_path, "simulate", *SMALL)
    chart = str(tmp_path / CHART_FILE)
    assert _run(tmp_path, "analyze", "--input", chart, "--column", "4") == 0
    assert "length = 170" in (tmp_path / REPORT_FILE).read_text()


########################
# Testing: exit status #
########################


def test_config_errors_exit_with_two(tmp_path, caplog):
    assert _run(tmp_path, "simulate", "--set", "colour=1") == 2
    assert "config error" in caplog.text
    assert _run(tmp_path, "analyze") == 2


def test_missing_files_exit_with_three(tmp_path):
    missing = str(tmp_path / "absent.json")
    assert _run(tmp_path, "simulate", "--ensemble", missing) == IO_EXIT_CODE
    assert _run(tmp_path, "analyze", "--input", missing) == IO_EXIT_CODE


def test_broken_files_exit_with_three(tmp_path):
    broken = tmp_path / "broken.txt"
    broken.write_text("0 1 2\n")
    assert _run(tmp_path, "analyze", "--input", str(broken)) == 3


def test_malformed_ensemble_exits_with_three(tmp_path):
    path = tmp_path / "ensemble.json"
    data = ensemble_to_dict(Ensemble())
    data["n_candidates"] = "many"
    path.write_text(json.dumps(data))
    assert _run(tmp_path, "simulate", "--ensemble", str(path)) == IO_EXIT_CODE


def test_parser_rejects_unknown_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["plot"])


def test_verbose_and_quiet_exclude_each_other():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["generate", "-v", "-q"])
