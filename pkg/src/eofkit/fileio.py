"""JSON state files, ensemble export and the flat key-value config format."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ensembles import Ensemble
from .eof import ConfigError, EofConfig
from .qstate import DensityMatrix, StateError, validate_density

SCHEMA_VERSION = 1
CONFIG_KEYS = {
    "cardinality": int,
    "restarts": int,
    "max_iterations": int,
    "objective_tolerance": float,
    "seed": int,
}


class StateFileError(StateError):
    pass


def _pairs(values) -> list[list[float]]:
    # float repr is the shortest string that round-trips exactly
    return [[float(z.real), float(z.imag)] for z in np.ravel(values)]


def state_to_dict(rho: DensityMatrix) -> dict:
    return {"schema": SCHEMA_VERSION, "d1": rho.d1, "d2": rho.d2, "matrix": _pairs(rho.matrix)}


def state_from_dict(doc) -> DensityMatrix:
    if not isinstance(doc, dict):
        raise StateFileError("state document must be a JSON object")
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise StateFileError(f"unsupported schema {schema!r}")
    try:
        d1, d2 = int(doc["d1"]), int(doc["d2"])
        flat = np.array(doc["matrix"], dtype=float)
    except KeyError as exc:
        raise StateFileError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"malformed field: {exc}") from None
    n = d1 * d2
    if d1 < 1 or d2 < 1 or flat.shape != (n * n, 2):
        raise StateFileError(f"matrix must be {n * n} [re, im] pairs for dims ({d1}, {d2})")
    return validate_density((flat[:, 0] + 1j * flat[:, 1]).reshape(n, n), (d1, d2))


def write_state(rho: DensityMatrix, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(rho)) + "\n")


def read_state(path) -> DensityMatrix:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: not valid JSON ({exc})") from None
    return state_from_dict(doc)


def ensemble_to_dict(e: Ensemble) -> dict:
    return {
        "d1": e.dims.d1,
        "d2": e.dims.d2,
        "weights": [float(x) for x in e.weights],
        "members": [_pairs(v) for v in e.members],
    }


def ensemble_from_dict(doc: dict) -> Ensemble:
    members = [[complex(re, im) for re, im in v] for v in doc["members"]]
    return Ensemble((doc["d1"], doc["d2"]), doc["weights"], members)


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines (``:`` also accepted, ``#`` starts a comment)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        key, _, val = line.partition(sep)
        key, val = key.strip(), val.strip()
        if not _ or key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unrecognized entry {raw.strip()!r}")
        try:
            values[key] = CONFIG_KEYS[key](val)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} expects {CONFIG_KEYS[key].__name__}, got {val!r}") from None
    return values


def read_config(path) -> dict:
    try:
        return parse_config_text(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None


def config_to_dict(cfg: EofConfig) -> dict:
    return {key: getattr(cfg, key) for key in CONFIG_KEYS}
