"""
Assembly of a `RunConfig` from a dataset preset, an optional config file and
the command-line flags, in that order of precedence.

Config files are flat `key = value` lines; `#` starts a comment. Every key
names one field of the configuration dataclasses, e.g. `temperature`,
`noise_sigma` or `field_scale`.
"""

import dataclasses
from typing import Any, Dict, List, Optional, Tuple

from tlsnoise.errors import ConfigError
from tlsnoise.options import (
    DATASET_PRESETS,
    AnalysisConfig,
    ChartConfig,
    CpwGeometry,
    EnsembleConfig,
    MaterialParams,
    QubitDecayParams,
    QubitElectrical,
    RunConfig,
)

DEFAULT_PRESET = "dataset2"

# Config section -> (dataclass, parent section)
SECTIONS: Dict[str, Tuple[type, Optional[str]]] = {
    "ensemble": (EnsembleConfig, None),
    "material": (MaterialParams, "ensemble"),
    "geometry": (CpwGeometry, "ensemble"),
    "electrical": (QubitElectrical, "ensemble"),
    "chart": (ChartConfig, None),
    "qubit": (QubitDecayParams, "chart"),
    "analysis": (AnalysisConfig, None),
}
RUN_KEYS = ["seed"]


def _key_sections() -> Dict[str, str]:
    keys = {}
    for section, (config_type, _) in SECTIONS.items():
        for field in dataclasses.fields(config_type):
            if field.name not in SECTIONS:
                keys[field.name] = section
    return keys


KEY_SECTIONS = _key_sections()
CONFIG_KEYS = sorted(KEY_SECTIONS) + RUN_KEYS


def read_config_file(path: str) -> Dict[str, str]:
    values: Dict[str, str] = {}
    with open(path, encoding="utf-8") as file:
        for number, raw in enumerate(file, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{number}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in values:
                raise ConfigError(f"{path}:{number}: '{key}' is set twice")
            values[key] = value
    return values


def parse_assignments(assignments: List[str]) -> Dict[str, str]:
    """
    `KEY=VALUE` strings of the `--set` flag.
    """
    values = {}
    for assignment in assignments:
        if "=" not in assignment:
            raise ConfigError(f"Expected KEY=VALUE, got '{assignment}'")
        key, value = assignment.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def parse_config(flags: Dict[str, Any], config_file: Optional[str] = None) -> RunConfig:
    """
    Merge the layers, cast every value to the type of its field and build the
    configuration. Unknown keys and values that do not cast raise a
    `ConfigError` naming the key.
    """
    file_values: Dict[str, Any] = read_config_file(config_file) if config_file else {}
    preset = flags.get("preset") or file_values.pop("preset", None) or DEFAULT_PRESET
    file_values.pop("preset", None)

    overrides: Dict[str, Any] = dict(file_values)
    overrides.update(parse_assignments(flags.get("set") or []))
    for key in ["seed", "workers"]:
        if flags.get(key) is not None:
            overrides[key] = flags[key]

    unknown = [key for key in overrides if key not in CONFIG_KEYS]
    if unknown:
        raise ConfigError(f"Unknown config key '{unknown[0]}'")

    values: Dict[str, Any] = dict(DATASET_PRESETS.get(preset, {}))
    if preset not in DATASET_PRESETS and preset != "custom":
        raise ConfigError(f"Unknown preset '{preset}'")
    values.update(overrides)

    sections: Dict[str, Dict[str, Any]] = {section: {} for section in SECTIONS}
    for key, value in values.items():
        if key in KEY_SECTIONS:
            section = KEY_SECTIONS[key]
            sections[section][key] = _cast(key, value, SECTIONS[section][0])

    # Nested sections first, then their parents
    built: Dict[str, Any] = {}
    for section in ["material", "geometry", "electrical", "qubit"]:
        built[section] = SECTIONS[section][0](**sections[section])
    ensemble = EnsembleConfig(
        material=built["material"],
        geometry=built["geometry"],
        electrical=built["electrical"],
        **sections["ensemble"],
    )
    chart = ChartConfig(qubit=built["qubit"], **sections["chart"])
    analysis = AnalysisConfig(**sections["analysis"])

    seed = _cast_int("seed", values.get("seed", 0))
    return RunConfig(
        subcommand=flags.get("subcommand", "simulate"),
        preset=preset,
        seed=seed,
        out_dir=flags.get("out_dir") or ".",
        scenario_path=flags.get("scenario"),
        ensemble_path=flags.get("ensemble"),
        input_path=flags.get("input"),
        column=flags.get("column"),
        render=bool(flags.get("render", False)),
        overridden_keys=list(overrides),
        ensemble=ensemble,
        chart=chart,
        analysis=analysis,
    )


###########
# private #
###########


def _cast(key: str, value: Any, config_type: type) -> Any:
    default = next(
        f.default for f in dataclasses.fields(config_type) if f.name == key
    )
    if isinstance(default, bool):
        return _cast_bool(key, value)
    if isinstance(default, int):
        return _cast_int(key, value)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(
            f"Invalid value for '{key}': expected a number, got {value!r}"
        )


def _cast_int(key: str, value: Any) -> int:
    try:
        # Exact for large integers such as 64-bit seeds
        return int(str(value).strip())
    except ValueError:
        pass
    try:
        number = float(value)
    except (TypeError, ValueError):
        number = float("nan")
    if not number.is_integer():
        raise ConfigError(
            f"Invalid value for '{key}': expected an integer, got {value!r}"
        )
    return int(number)


def _cast_bool(key: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"Invalid value for '{key}': expected a boolean, got {value!r}")
