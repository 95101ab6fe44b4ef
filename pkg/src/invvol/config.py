"""Run configuration: a JSON manifest merged with command-line overrides.

Manifest layout (every key optional)::

    {
      "model":  {"kind": "sabr", "sigma0": 0.3, "alpha": 0.3, "rho": -0.3, "v": 0.5, "hurst": 0.4},
      "option": {"spot": 100, "strike": 100, "maturity": 0.001, "rate_R": null},
      "sim":    {"paths": 200000, "steps": 50, "seed": 0, "antithetic": true},
      "format": "json"
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError
from .mc import OptionSpec, SimConfig
from .models import Bergomi, ConstVol, ModelParams, Sabr

DEFAULTS = {
    "model": {"kind": "sabr", "sigma0": 0.3, "alpha": 0.3, "rho": -0.3, "v": 0.5, "hurst": 0.4},
    "option": {"spot": 100.0, "strike": None, "maturity": 0.001, "rate_R": None},
    "sim": {"paths": 200_000, "steps": 50, "seed": 0, "antithetic": True},
    "format": None,
}

MODEL_KINDS = ("sabr", "bergomi", "constvol")


class ConfigError(DomainError):
    """Invalid or unreadable configuration."""


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    option: OptionSpec
    sim: SimConfig
    output_format: str | None = None


def read_manifest(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    return data


def merge(manifest: dict | None, overrides: dict) -> dict:
    """Defaults < manifest < overrides.  ``overrides`` maps ``section.key`` to values;
    ``None`` values are ignored."""
    out = {k: (dict(v) if isinstance(v, dict) else v) for k, v in DEFAULTS.items()}
    for section, values in (manifest or {}).items():
        if isinstance(out[section], dict):
            if not isinstance(values, dict):
                raise ConfigError(f"section {section!r} must be an object")
            unknown = set(values) - set(out[section])
            if unknown:
                raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
            out[section].update(values)
        else:
            out[section] = values
    for dotted, value in overrides.items():
        if value is None:
            continue
        if "." in dotted:
            section, key = dotted.split(".", 1)
            out[section][key] = value
        else:
            out[dotted] = value
    return out


def build_model(m: dict) -> ModelParams:
    kind = str(m.get("kind", "")).lower()
    try:
        if kind == "sabr":
            return Sabr(float(m["sigma0"]), float(m["alpha"]), float(m["rho"]))
        if kind == "bergomi":
            return Bergomi(float(m["sigma0"]), float(m["v"]), float(m["hurst"]), float(m["rho"]))
        if kind == "constvol":
            return ConstVol(float(m["sigma0"]))
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc
    raise ConfigError(f"model kind must be one of {MODEL_KINDS}, got {kind!r}")


def build(merged: dict) -> RunConfig:
    o, s = merged["option"], merged["sim"]
    try:
        spot = float(o["spot"])
        strike = spot if o.get("strike") is None else float(o["strike"])
        rate = None if o.get("rate_R") is None else float(o["rate_R"])
        option = OptionSpec(spot, strike, float(o["maturity"]), rate)
        sim = SimConfig(int(s["paths"]), int(s["steps"]), int(s["seed"]), bool(s["antithetic"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    fmt = merged.get("format")
    if fmt not in (None, "json", "csv"):
        raise ConfigError(f"format must be json or csv, got {fmt!r}")
    return RunConfig(build_model(merged["model"]), option, sim, fmt)
