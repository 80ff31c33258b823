"""JSON experiment configuration: a flat object of RunConfig fields.

A run config file looks like

    {
      "variant": "SupSyS",
      "objective": "rastrigin",
      "dim": 10,
      "alpha_mu": 0.01,
      "alpha_sigma": 0.005,
      "mu0_range": 1.0,
      "sigma0": 1.0,
      "max_evaluations": 20000,
      "target_reward": -10.0,
      "base_seed": 1,
      "run_count": 50
    }

A grid-search config adds a "grid" object holding "alpha_mu" and
"alpha_sigma" lists plus optional "metric" and "runs_per_cell".  Unknown
keys are rejected by name so typos fail loudly instead of being ignored.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Any

from .harness import GridSpec, RunConfig
from .objectives import OBJECTIVE_FUNCTIONS
from .updates import Variant


class ConfigError(ValueError):
    """Malformed or inconsistent configuration input."""


_RUN_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_REQUIRED = (
    "variant",
    "objective",
    "dim",
    "alpha_mu",
    "alpha_sigma",
    "mu0_range",
    "sigma0",
    "max_evaluations",
    "target_reward",
    "base_seed",
    "run_count",
)
_INT_KEYS = {"dim", "max_evaluations", "base_seed", "run_count", "grid_points", "baseline_window"}
_FLOAT_KEYS = {
    "alpha_mu",
    "alpha_sigma",
    "mu0_range",
    "sigma0",
    "target_reward",
    "sigma_floor",
    "baseline_gamma",
}
_STR_KEYS = {"variant", "objective", "baseline_kind", "label"}


def _check_int(key: str, value: Any) -> int:
    # bool is an int subclass; a config saying "dim": true is a mistake
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
    return value


def _check_float(key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r} must be a number, got {value!r}")
    return float(value)


def _check_str(key: str, value: Any) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"key {key!r} must be a string, got {value!r}")
    return value


def _coerce(key: str, value: Any) -> Any:
    if key in _INT_KEYS:
        return _check_int(key, value)
    if key in _FLOAT_KEYS:
        return _check_float(key, value)
    if key == "label" and value is None:
        return None
    if key in _STR_KEYS:
        return _check_str(key, value)
    raise ConfigError(f"unknown config key {key!r}")


def run_config_from_dict(data: dict[str, Any]) -> RunConfig:
    """Build a RunConfig from a parsed flat JSON object."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(data) - set(_RUN_FIELDS))
    if unknown:
        raise ConfigError("unknown config keys: " + ", ".join(repr(k) for k in unknown))
    missing = sorted(set(_REQUIRED) - set(data))
    if missing:
        raise ConfigError("missing required config keys: " + ", ".join(repr(k) for k in missing))

    kwargs = {key: _coerce(key, value) for key, value in data.items()}
    variant = kwargs["variant"]
    try:
        kwargs["variant"] = Variant(variant)
    except ValueError:
        valid = ", ".join(v.value for v in Variant)
        raise ConfigError(f"key 'variant' must be one of {valid}; got {variant!r}") from None
    if kwargs["objective"] not in OBJECTIVE_FUNCTIONS:
        valid = ", ".join(sorted(OBJECTIVE_FUNCTIONS))
        raise ConfigError(f"key 'objective' must be one of {valid}; got {kwargs['objective']!r}")
    try:
        return RunConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def run_config_to_dict(config: RunConfig) -> dict[str, Any]:
    """Flat dict that round-trips through run_config_from_dict."""
    out: dict[str, Any] = {}
    for name in _RUN_FIELDS:
        value = getattr(config, name)
        if name == "variant":
            value = value.value
        if name == "label" and value is None:
            continue
        out[name] = value
    return out


def load_run_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    return run_config_from_dict(data)


def save_run_config(config: RunConfig, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(run_config_to_dict(config), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Grid-search config: run fields plus a "grid" object

_GRID_KEYS = {"alpha_mu", "alpha_sigma", "metric", "runs_per_cell"}


def _check_alpha_list(key: str, value: Any) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"grid key {key!r} must be a non-empty list of numbers")
    return [_check_float(f"grid.{key}[{i}]", v) for i, v in enumerate(value)]


def grid_spec_from_dict(data: dict[str, Any]) -> GridSpec:
    if not isinstance(data, dict):
        raise ConfigError("'grid' must be a JSON object")
    unknown = sorted(set(data) - _GRID_KEYS)
    if unknown:
        raise ConfigError("unknown grid keys: " + ", ".join(repr(k) for k in unknown))
    for key in ("alpha_mu", "alpha_sigma"):
        if key not in data:
            raise ConfigError(f"grid is missing required key {key!r}")
    kwargs: dict[str, Any] = {
        "alpha_mu": _check_alpha_list("alpha_mu", data["alpha_mu"]),
        "alpha_sigma": _check_alpha_list("alpha_sigma", data["alpha_sigma"]),
    }
    if "metric" in data:
        kwargs["metric"] = _check_str("metric", data["metric"])
    if "runs_per_cell" in data:
        kwargs["runs_per_cell"] = _check_int("runs_per_cell", data["runs_per_cell"])
    try:
        return GridSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_grid_search_config(path: str) -> tuple[RunConfig, GridSpec]:
    """Parse a grid-search file: flat run fields plus a "grid" object."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    if "grid" not in data:
        raise ConfigError("grid-search config requires a 'grid' object")
    grid = grid_spec_from_dict(data["grid"])
    run_data = {k: v for k, v in data.items() if k != "grid"}
    return run_config_from_dict(run_data), grid
