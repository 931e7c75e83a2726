"""
Command-line front end.

    tlsnoise generate [--preset P] [--seed S] [--out DIR]
    tlsnoise simulate [--ensemble FILE] [--render] ...
    tlsnoise scenario --scenario FILE_OR_NAME [--column K] ...
    tlsnoise analyze --input FILE [--column K] ...

Every subcommand accepts `--config FILE` and any number of `--set KEY=VALUE`.
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from tlsnoise.analysis import AnalysisReport, analysis_report
from tlsnoise.chart_io import (
    config_digest,
    load_series,
    save_chart,
    save_frequency_traces,
    save_metadata,
)
from tlsnoise.dynamics import SpectrotemporalChart, compute_chart, run_scenario
from tlsnoise.efield import write_field_profile
from tlsnoise.ensemble import Ensemble, build_ensemble, ensemble_summary
from tlsnoise.ensemble_io import load_ensemble, save_ensemble
from tlsnoise.errors import ConfigError, TlsNoiseError
from tlsnoise.options import PRESET_NAMES, SUBCOMMANDS, RunConfig
from tlsnoise.param_initializer import parse_config
from tlsnoise.random_streams import RandomStream
from tlsnoise.render import chart_to_string, plot_to_string
from tlsnoise.scenarios import BUILTIN_SCENARIOS, load_scenario
from tlsnoise.tls_physics import thermal_excited_population

_logger = logging.getLogger("tlsnoise")

ENSEMBLE_FILE = "ensemble.json"
CHART_FILE = "chart.txt"
METADATA_FILE = "meta.json"
FIELD_PROFILE_FILE = "field_profile.txt"
TRACES_FILE = "frequency_traces.txt"
REPORT_FILE = "report.txt"
RENDER_FILE = "render.txt"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
# Exit status of failed file access
IO_EXIT_CODE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlsnoise",
        description="Simulate qubit T1 fluctuations caused by two-level defects.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--preset", choices=PRESET_NAMES)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--config", metavar="FILE", help="flat key = value file")
    parser.add_argument("--out", dest="out_dir", metavar="DIR", default=".")
    parser.add_argument(
        "--scenario",
        metavar="FILE",
        help=f"scenario file, or one of {sorted(BUILTIN_SCENARIOS)}",
    )
    parser.add_argument("--ensemble", metavar="FILE", help="reuse an ensemble file")
    parser.add_argument("--input", metavar="FILE", help="chart or series to analyze")
    parser.add_argument("--column", type=int, help="chart column, counted from 0")
    parser.add_argument("--render", action="store_true", help="also write text plots")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config key, repeatable",
    )
    parser.add_argument("--workers", type=int)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true")
    verbosity.add_argument("--quiet", "-q", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    flags: Dict[str, Any] = vars(args)
    try:
        cfg = parse_config(flags, config_file=args.config)
        run_pipeline(cfg)
    except TlsNoiseError as error:
        _logger.error("%s error: %s", error.category, error)
        return error.exit_code()
    except OSError as error:
        _logger.error("io error: %s", error)
        return IO_EXIT_CODE
    return 0


def run_pipeline(cfg: RunConfig) -> None:
    """
    Run one subcommand and write its artifacts into `cfg.out_dir`.
    """
    os.makedirs(cfg.out_dir, exist_ok=True)
    digest = config_digest(cfg)
    _logger.info(
        "Running %s, preset %s, seed %d, config %s",
        cfg.subcommand,
        cfg.preset,
        cfg.seed,
        digest[:12],
    )
    if cfg.subcommand == "generate":
        _generate(cfg, digest)
    elif cfg.subcommand == "simulate":
        _simulate(cfg, digest)
    elif cfg.subcommand == "scenario":
        _scenario(cfg, digest)
    else:
        _analyze(cfg, digest)


###########
# private #
###########


def _path(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.out_dir, name)


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    _logger.setLevel(level)
    if not _logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        _logger.addHandler(handler)


def _generate(cfg: RunConfig, digest: str) -> Ensemble:
    ensemble = build_ensemble(cfg.ensemble, cfg.seed, workers=cfg.chart.workers)
    save_ensemble(_path(cfg, ENSEMBLE_FILE), ensemble, config_digest=digest)
    write_field_profile(
        _path(cfg, FIELD_PROFILE_FILE), cfg.ensemble.geometry, v_applied=1.0
    )
    for key, value in ensemble_summary(ensemble).items():
        print(f"{key} = {value!r}")
    return ensemble


def _simulate(cfg: RunConfig, digest: str) -> None:
    if cfg.ensemble_path:
        ensemble = load_ensemble(cfg.ensemble_path)
    else:
        ensemble = _generate(cfg, digest)
    chart = compute_chart(ensemble, cfg.chart, RandomStream(cfg.seed))
    chart.metadata["ensemble_summary"] = ensemble_summary(ensemble)
    _write_chart(cfg, chart, digest)


def _scenario(cfg: RunConfig, digest: str) -> None:
    if not cfg.scenario_path:
        raise ConfigError("The scenario subcommand needs --scenario")
    scenario = load_scenario(cfg.scenario_path)
    chart_cfg = scenario.chart_config(cfg.chart)
    chart, traces = run_scenario(scenario.defects, chart_cfg, RandomStream(cfg.seed))
    chart.metadata["scenario"] = scenario.name
    chart.metadata["scenario_chart"] = dict(scenario.chart)
    _write_chart(cfg, chart, digest)
    if traces:
        save_frequency_traces(_path(cfg, TRACES_FILE), traces)

    if cfg.column is not None or chart.shape[1] == 1:
        column = cfg.column or 0
        if not 0 <= column < chart.shape[1]:
            raise ConfigError(f"Invalid value for 'column': {column} out of range")
        ts = load_series(_path(cfg, CHART_FILE), column)
        _write_report(cfg, analysis_report(ts, cfg.analysis), digest)


def _analyze(cfg: RunConfig, digest: str) -> None:
    if not cfg.input_path:
        raise ConfigError("The analyze subcommand needs --input")
    ts = load_series(cfg.input_path, cfg.column)
    _write_report(cfg, analysis_report(ts, cfg.analysis), digest)


def _write_chart(cfg: RunConfig, chart: SpectrotemporalChart, digest: str) -> None:
    chart.metadata.update(
        {
            "config_digest": digest,
            "preset": cfg.preset,
            "overridden_keys": cfg.overridden_keys,
            "thermal_excited_population": float(
                thermal_excited_population(
                    cfg.chart.qubit.fq, cfg.ensemble.material.temperature
                )
            ),
        }
    )
    save_chart(_path(cfg, CHART_FILE), chart)
    save_metadata(_path(cfg, METADATA_FILE), chart)
    if cfg.render:
        _write_render(cfg, chart_to_string(chart, title="T1"))


def _write_report(cfg: RunConfig, report: AnalysisReport, digest: str) -> None:
    lines = [f"seed = {cfg.seed!r}", f"config_digest = {digest!r}"]
    lines += report.to_lines()
    with open(_path(cfg, REPORT_FILE), "w", encoding="utf-8") as file:
        file.write("\n".join(lines) + "\n")
    for key, value in report.header().items():
        print(f"{key} = {value!r}")
    if cfg.render:
        curve = report.curve
        _write_render(
            cfg,
            plot_to_string(
                curve.sigma,
                curve.taus,
                x_as_log=True,
                y_as_log=True,
                lines=True,
                title="Allan deviation",
                x_unit="s",
            ),
        )


def _write_render(cfg: RunConfig, lines: List[str]) -> None:
    with open(_path(cfg, RENDER_FILE), "w", encoding="utf-8") as file:
        file.write("\n".join(lines) + "\n")
    for line in lines:
        print(line)
