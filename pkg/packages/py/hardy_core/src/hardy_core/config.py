"""Numerical defaults and JSON configuration loading."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict

from .errors import InputError
from .paths import CONFIG_DIR

if TYPE_CHECKING:
    from .dist_core import Distribution, StepFunction
    from .functionals import SequenceInput

QUAD_TOL = 1e-10
MASS_TOLERANCE = 1e-9
DEFAULT_SEED = 0
DEFAULT_CONFIG_PATH = CONFIG_DIR / "suite.json"
SCHEMA_VERSION = "1"

DEFAULT_SUITE_CONFIG: Dict[str, Any] = {
    "galois_cases": 1000,
    "galois_levels": 1000,
    "inequality_cases": 500,
    "alpha_cases": 300,
    "convexity_triples": 10000,
    "transform_cases": 200,
    "rearrangement_cases": 100,
    "identity_cases": 200,
    "oracle_cases": 200,
    "mc_cases": 200,
    "mc_n": 1000000,
    "max_atoms": 8,
    "max_segments": 4,
    "max_pieces": 10,
    "p_gt1": [1.05, 6.0],
    "p_lt1": [0.05, 0.95],
}

_INT_FIELDS = (
    "galois_cases",
    "galois_levels",
    "inequality_cases",
    "alpha_cases",
    "convexity_triples",
    "transform_cases",
    "rearrangement_cases",
    "identity_cases",
    "oracle_cases",
    "mc_cases",
    "mc_n",
    "max_atoms",
    "max_segments",
    "max_pieces",
)


def read_json_file(path_raw: str | Path) -> Any:
    path = Path(path_raw).expanduser().resolve()
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(
            f"Invalid JSON in {path} (line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from exc


def load_distribution(path_raw: str | Path) -> Distribution:
    from .dist_core import Distribution

    return Distribution.from_dict(read_json_file(path_raw))


def load_step_function(path_raw: str | Path) -> StepFunction:
    from .dist_core import StepFunction

    return StepFunction.from_dict(read_json_file(path_raw))


def load_sequence(path_raw: str | Path) -> SequenceInput:
    from .functionals import SequenceInput

    return SequenceInput.from_dict(read_json_file(path_raw))


def _parse_range(name: str, raw: Any) -> list[float]:
    if not isinstance(raw, list) or len(raw) != 2:
        raise InputError(f'"{name}" must be a [low, high] array.', field=name)
    for item in raw:
        numeric = isinstance(item, (int, float)) and not isinstance(item, bool)
        if not numeric or not math.isfinite(item):
            raise InputError(f'"{name}" must hold two finite numbers.', field=name)
    low, high = (float(item) for item in raw)
    if not low < high:
        raise InputError(f'"{name}" must satisfy low < high.', field=name)
    return [low, high]


def load_suite_config(config_path_raw: str) -> tuple[Dict[str, Any], str]:
    config = dict(DEFAULT_SUITE_CONFIG)
    source = "built-in defaults"

    if not config_path_raw:
        return config, source

    config_path = Path(config_path_raw).expanduser().resolve()
    if not config_path.exists():
        if config_path == DEFAULT_CONFIG_PATH:
            return config, source
        raise FileNotFoundError(f"Config file not found: {config_path}")

    raw_config = read_json_file(config_path)
    if not isinstance(raw_config, dict):
        raise InputError("Config root must be a JSON object.")

    for name in _INT_FIELDS:
        if name not in raw_config:
            continue
        value = raw_config[name]
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise InputError(f'"{name}" must be a nonnegative integer.', field=name)
        config[name] = value

    if "p_gt1" in raw_config:
        low, high = _parse_range("p_gt1", raw_config["p_gt1"])
        if low <= 1.0:
            raise InputError('"p_gt1" must lie above 1.', field="p_gt1")
        config["p_gt1"] = [low, high]
    if "p_lt1" in raw_config:
        low, high = _parse_range("p_lt1", raw_config["p_lt1"])
        if low <= 0.0 or high >= 1.0:
            raise InputError('"p_lt1" must lie inside (0, 1).', field="p_lt1")
        config["p_lt1"] = [low, high]

    return config, str(config_path)


__all__ = [
    "DEFAULT_CONFIG_PATH",
    "DEFAULT_SEED",
    "DEFAULT_SUITE_CONFIG",
    "MASS_TOLERANCE",
    "QUAD_TOL",
    "SCHEMA_VERSION",
    "load_distribution",
    "load_sequence",
    "load_step_function",
    "load_suite_config",
    "read_json_file",
]
