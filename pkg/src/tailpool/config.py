"""Flat key=value configuration files.

One ``key = value`` pair per line, ``#`` starts a comment line, blank lines
ignored.  Unknown keys, duplicate keys, and invariant violations are
rejected with the offending key named, so batch runs fail loudly instead of
silently using defaults.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Callable

from .simulation import LinearTsConfig, ScenarioConfig
from .welfare import WelfareConfig

__all__ = [
    "ConfigError",
    "read_keyvalues",
    "parse_scenario_config",
    "parse_linear_ts_config",
    "parse_welfare_config",
    "parse_config",
]


class ConfigError(ValueError):
    """A configuration file could not be parsed or validated."""


def read_keyvalues(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def _convert(key: str, value: str, conv: Callable[[str], Any]) -> Any:
    try:
        return conv(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: invalid value {value!r} ({exc})") from None


def _int_list(text: str) -> list[int]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise ValueError("empty list")
    return [int(part) for part in items]


_SCENARIO_KEYS: dict[str, Callable[[str], Any]] = {
    "m": int,
    "alpha_post": float,
    "alpha_pre": float,
    "shock_period": int,
    "horizon": int,
    "burn_in": int,
    "regime_mode": str,
    "seed": int,
    "estimate_rule": str,
    "obs_per_period": int,
    "period_step": float,
}

_LINEAR_TS_KEYS: dict[str, Callable[[str], Any]] = {
    "a": float,
    "b": float,
    "c": float,
    "d": float,
    "e": float,
    "noise_sd": float,
    "horizon": int,
    "seed": int,
}

_WELFARE_CONFIG_KEYS: dict[str, Callable[[str], Any]] = {
    "wealth_c": float,
    "indemnity_scale_a": float,
    "supervisory_cost": float,
    "per_obs_cost": float,
    "n_obs": int,
    "alpha_mean": float,
    "confidence": float,
}

_WELFARE_PIPELINE_KEYS: dict[str, Callable[[str], Any]] = {
    "market_sizes": _int_list,
    "alpha_post": float,
    "alpha_pre": float,
    "replications": int,
    "seed": int,
    "shock_period": int,
    "decision_offset": int,
    "decision_window": int,
    "estimate_rule": str,
    "method": str,
}


def _typed(pairs: dict[str, str], schema: dict[str, Callable[[str], Any]]) -> dict[str, Any]:
    unknown = sorted(set(pairs) - set(schema))
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r}")
    return {key: _convert(key, value, schema[key]) for key, value in pairs.items()}


def parse_scenario_config(path: str | Path) -> ScenarioConfig:
    values = _typed(read_keyvalues(path), _SCENARIO_KEYS)
    for required in ("m", "alpha_post"):
        if required not in values:
            raise ConfigError(f"missing required key {required!r}")
    try:
        return ScenarioConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_linear_ts_config(path: str | Path) -> LinearTsConfig:
    values = _typed(read_keyvalues(path), _LINEAR_TS_KEYS)
    try:
        return LinearTsConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_welfare_config(path: str | Path) -> tuple[WelfareConfig, dict[str, Any]]:
    """The welfare constants plus keyword overrides for the Monte Carlo pipeline."""
    pairs = read_keyvalues(path)
    schema = dict(_WELFARE_CONFIG_KEYS) | dict(_WELFARE_PIPELINE_KEYS)
    values = _typed(pairs, schema)
    cfg_values = {k: v for k, v in values.items() if k in _WELFARE_CONFIG_KEYS}
    pipeline = {k: v for k, v in values.items() if k in _WELFARE_PIPELINE_KEYS}
    try:
        cfg = WelfareConfig(**cfg_values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg, pipeline


def parse_config(path: str | Path, kind: str):
    """Dispatch on the config kind: scenario, linear_ts, or welfare."""
    if kind == "scenario":
        return parse_scenario_config(path)
    if kind == "linear_ts":
        return parse_linear_ts_config(path)
    if kind == "welfare":
        return parse_welfare_config(path)
    raise ValueError(f"unknown config kind {kind!r}")
