"""
Ensemble files: JSON with sorted keys, so that saving the same ensemble twice
gives identical bytes. Floats are written in their shortest round-trip form.
"""

import json
import logging
from dataclasses import asdict, fields
from typing import Any, Dict, List, Optional

from tlsnoise.ensemble import Ensemble, QTlsRecord, TTlsRecord
from tlsnoise.errors import SchemaError

_logger = logging.getLogger(__name__)

SCHEMA = "tlsnoise-ensemble"
SCHEMA_VERSION = 1

# Units of every stored field, written into the file header
UNITS: Dict[str, str] = {
    "f": "Hz",
    "g": "Hz",
    "gamma1": "1/s",
    "x": "um",
    "z": "nm",
    "dipole": "debye",
    "delta0": "Hz",
    "delta_f": "Hz",
    "gamma": "Hz",
    "delta": "Hz",
    "e_t": "Hz",
    "r": "nm",
    "u": "Hz",
    "barrier": "Hz",
}


def ensemble_to_dict(ensemble: Ensemble) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "units": UNITS,
        "seed": ensemble.seed,
        "n_candidates": ensemble.n_candidates,
        "qtls": [asdict(q) for q in ensemble],
    }


def ensemble_from_dict(data: Dict[str, Any]) -> Ensemble:
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise SchemaError(f"Not a {SCHEMA} document")
    if data.get("version") != SCHEMA_VERSION:
        raise SchemaError(
            f"Unsupported ensemble version {data.get('version')!r}, "
            f"expected {SCHEMA_VERSION}"
        )
    try:
        qtls = tuple(_qtls_from_dict(item) for item in data["qtls"])
        return Ensemble(
            qtls=qtls, seed=data["seed"], n_candidates=int(data["n_candidates"])
        )
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as error:
        raise SchemaError(f"Malformed ensemble document: {error!r}") from error


def save_ensemble(
    path: str, ensemble: Ensemble, config_digest: Optional[str] = None
) -> None:
    data = ensemble_to_dict(ensemble)
    if config_digest is not None:
        data["config_digest"] = config_digest
    with open(path, "w", encoding="utf-8") as file:
        json.dump(data, file, sort_keys=True, indent=1)
        file.write("\n")
    _logger.info("Wrote %d coupled defects to %s", len(ensemble), path)


def load_ensemble(path: str) -> Ensemble:
    with open(path, encoding="utf-8") as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as error:
            raise SchemaError(f"Cannot parse ensemble file {path}: {error}") from error
    return ensemble_from_dict(data)


###########
# private #
###########


def _qtls_from_dict(item: Dict[str, Any]) -> QTlsRecord:
    values = _known_fields(item, QTlsRecord)
    ttls: List[TTlsRecord] = [
        TTlsRecord(**_known_fields(t, TTlsRecord)) for t in item.get("ttls_set", [])
    ]
    values["ttls_set"] = tuple(ttls)
    return QTlsRecord(**values)


def _known_fields(item: Dict[str, Any], record_type: type) -> Dict[str, Any]:
    names = {f.name for f in fields(record_type)}
    unknown = set(item) - names
    if unknown:
        raise SchemaError(
            f"Unknown fields for {record_type.__name__}: {sorted(unknown)}"
        )
    return dict(item)
