"""
Hand-written defect configurations.

A scenario lists coupled defects by `(f, g, gamma1)` and, for each, its
thermal defects by `(gamma, delta_f)`. It may also set chart keys such as
the frequency grid. Scenario files are JSON documents of the form

    {
      "chart": {"fq_min": 4.50e9, "fq_max": 4.58e9, "n_f": 41},
      "qtls": [
        {"f": 4.510e9, "g": 50e3, "gamma1": 10e6,
         "ttls": [{"gamma": 2e-5, "delta_f": 0.9e6}]}
      ]
    }
"""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Sequence, Tuple

from tlsnoise.ensemble import Ensemble, QTlsRecord, TTlsRecord
from tlsnoise.errors import ConfigError
from tlsnoise.options import ChartConfig

_logger = logging.getLogger(__name__)

QTLS_KEYS = {"f", "g", "gamma1", "ttls"}
TTLS_KEYS = {"gamma", "delta_f"}
CHART_KEYS = {"n_f", "fq_min", "fq_max", "dt", "t_obs", "noise_sigma"}

MHZ = 1e6
GHZ = 1e9
UHZ = 1e-6


@dataclass(frozen=True)
class Scenario:
    name: str
    defects: Ensemble
    # Chart keys set by the scenario, applied on top of the run configuration
    chart: Dict[str, float] = field(default_factory=dict)

    def chart_config(self, base: ChartConfig) -> ChartConfig:
        return replace(base, **self.chart)


def _defect(
    f: float, g: float, gamma1: float, ttls: Sequence[Tuple[float, float]]
) -> Dict[str, Any]:
    return {
        "f": f,
        "g": g,
        "gamma1": gamma1,
        "ttls": [{"gamma": gamma, "delta_f": delta_f} for gamma, delta_f in ttls],
    }


def _three_defects(g: float) -> List[Dict[str, Any]]:
    return [
        _defect(
            4.510 * GHZ,
            g,
            10 * MHZ,
            [
                (2e-5, 0.9 * MHZ),
                (5e-5, 0.7 * MHZ),
                (8e-5, 0.7 * MHZ),
                (1e-4, 0.6 * MHZ),
                (2e-4, 0.6 * MHZ),
                (3e-4, 0.5 * MHZ),
                (4e-4, 0.3 * MHZ),
                (1e-3, 0.1 * MHZ),
            ],
        ),
        _defect(
            4.531 * GHZ,
            g,
            5 * MHZ,
            [(3e-5, 0.8 * MHZ), (8e-5, 0.2 * MHZ), (2e-4, 0.1 * MHZ)],
        ),
        _defect(4.570 * GHZ, g, 90 * MHZ, [(6e-6, 20 * MHZ), (8e-6, 3 * MHZ)]),
    ]


# Wide frequency sweep for the three-defect configurations
SWEEP_CHART = {"fq_min": 4.50 * GHZ, "fq_max": 4.58 * GHZ, "n_f": 41}
# Single qubit frequency for the time-series configurations. The qubit sits
# 1.1 MHz below the single-rts defect, close to where the swing of T1 between
# the two thermal-defect states is largest (about 2 us half swing).
COLUMN_CHART = {"fq_min": 4.500 * GHZ, "fq_max": 4.500 * GHZ, "n_f": 1}

BUILTIN_SCENARIOS: Dict[str, Dict[str, Any]] = {
    "three-defects-g50": {"chart": SWEEP_CHART, "qtls": _three_defects(50e3)},
    "three-defects-g100": {"chart": SWEEP_CHART, "qtls": _three_defects(100e3)},
    "single-rts": {
        "chart": COLUMN_CHART,
        "qtls": [
            _defect(4.5011 * GHZ, 0.04 * MHZ, 15 * MHZ, [(100 * UHZ, 0.6 * MHZ)])
        ],
    },
    "four-rts": {
        "chart": COLUMN_CHART,
        "qtls": [
            _defect(4.5011 * GHZ, 0.02 * MHZ, 10 * MHZ, [(75 * UHZ, 0.8 * MHZ)]),
            _defect(4.5015 * GHZ, 0.02 * MHZ, 10 * MHZ, [(70 * UHZ, 0.6 * MHZ)]),
            _defect(4.4989 * GHZ, 0.02 * MHZ, 10 * MHZ, [(140 * UHZ, 0.8 * MHZ)]),
            _defect(4.4986 * GHZ, 0.02 * MHZ, 10 * MHZ, [(75 * UHZ, 0.4 * MHZ)]),
        ],
    },
}


def parse_scenario(data: Any, name: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ConfigError(f"Scenario '{name}' must be a mapping")
    _check_keys(data, {"chart", "qtls"}, name)
    chart = data.get("chart", {})
    if not isinstance(chart, dict):
        raise ConfigError(f"Scenario '{name}': 'chart' must be a mapping")
    _check_keys(chart, CHART_KEYS, f"{name}.chart")
    chart_values = {
        key: _number(value, f"{name}.chart.{key}") for key, value in chart.items()
    }

    if "n_f" in chart_values:
        chart_values["n_f"] = int(chart_values["n_f"])

    entries = data.get("qtls", [])
    if not isinstance(entries, list):
        raise ConfigError(f"Scenario '{name}': 'qtls' must be a list")
    defects = tuple(
        _qtls_record(entry, f"{name}.qtls[{k}]") for k, entry in enumerate(entries)
    )
    _logger.debug("Scenario '%s' has %d coupled defects", name, len(defects))
    return Scenario(name=name, defects=Ensemble(qtls=defects), chart=chart_values)


def load_scenario(path_or_name: str) -> Scenario:
    """
    A built-in scenario by name, or a scenario file.
    """
    if path_or_name in BUILTIN_SCENARIOS:
        return parse_scenario(BUILTIN_SCENARIOS[path_or_name], path_or_name)
    try:
        with open(path_or_name, encoding="utf-8") as file:
            data = json.load(file)
    except json.JSONDecodeError as error:
        raise ConfigError(f"Cannot parse scenario {path_or_name}: {error}") from error
    return parse_scenario(data, path_or_name)


###########
# private #
###########


def _qtls_record(entry: Any, where: str) -> QTlsRecord:
    if not isinstance(entry, dict):
        raise ConfigError(f"{where} must be a mapping")
    _check_keys(entry, QTLS_KEYS, where)
    for key in ["f", "g", "gamma1"]:
        if key not in entry:
            raise ConfigError(f"{where} is missing '{key}'")
    f, g, gamma1 = (
        _number(entry[key], f"{where}.{key}") for key in ["f", "g", "gamma1"]
    )
    if not (f > 0 and g >= 0 and gamma1 > 0):
        raise ConfigError(f"{where} needs f > 0, g >= 0 and gamma1 > 0")

    ttls = []
    for j, item in enumerate(entry.get("ttls", [])):
        item_where = f"{where}.ttls[{j}]"
        if not isinstance(item, dict) or set(item) != TTLS_KEYS:
            raise ConfigError(f"{item_where} must hold exactly {sorted(TTLS_KEYS)}")
        gamma = _number(item["gamma"], f"{item_where}.gamma")
        if gamma < 0:
            raise ConfigError(f"{item_where}.gamma must not be negative")
        delta_f = _number(item["delta_f"], f"{item_where}.delta_f")
        ttls.append(TTlsRecord(delta_f=delta_f, gamma=gamma))
    return QTlsRecord(f=f, g=g, gamma1=gamma1, ttls_set=tuple(ttls))


def _check_keys(mapping: Dict[str, Any], allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"Unknown keys in {where}: {sorted(unknown)}")


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)
