"""Run configuration: a JSON file merged with command-line overrides.

File layout::

    {
      "density": {"kind": "breit-wigner", "m": 1.0, "gamma": 0.01, "tail_sigmas": 1e4},
      "preparation": {"kind": "velocity", "v": 0.6},
      "grid": {"kind": "lin", "t_min": 0.0, "t_max": 300.0, "n": 301},
      "tolerances": {"rel_tol": 1e-9, "abs_tol": 1e-12},
      "format": "csv",
      "out": "decay.csv"
    }

Every key is optional; missing keys fall back to the defaults below.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .amplitude import (DefiniteMomentum, DefiniteVelocity, KinematicPreparation, Rest,
                        Tolerances, linear_grid, log_grid)
from .errors import ConfigError, DomainError
from .spectral import MassDensity, density_from_config

DEFAULTS = {
    "density": {"kind": "breit-wigner", "m": 1.0, "gamma": 0.01, "tail_sigmas": 1.0e4},
    "preparation": {"kind": "rest"},
    "grid": {"kind": "lin", "t_min": 0.0, "t_max": 300.0, "n": 301},
    "tolerances": {"rel_tol": 1e-9, "abs_tol": 1e-12},
    "format": "csv",
    "out": None,
}


def preparation_from_config(cfg: dict) -> KinematicPreparation:
    kind = cfg.get("kind", "rest")
    try:
        if kind == "rest":
            return Rest()
        if kind == "velocity":
            return DefiniteVelocity(float(cfg["v"]))
        if kind == "momentum":
            return DefiniteMomentum(float(cfg["p"]))
    except KeyError as exc:
        raise ConfigError(f"preparation {kind!r} is missing {exc}") from None
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown preparation {kind!r}")


def grid_from_config(cfg: dict) -> np.ndarray:
    kind = cfg.get("kind", "lin")
    try:
        n = int(cfg["n"])
        t_max = float(cfg["t_max"])
        t_min = float(cfg.get("t_min", 0.0))
        if kind == "lin":
            return linear_grid(t_max, n, t_min)
        if kind == "log":
            return log_grid(t_min, t_max, n)
    except KeyError as exc:
        raise ConfigError(f"grid is missing {exc}") from None
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown grid kind {kind!r}")


@dataclass
class RunConfig:
    density: MassDensity
    preparation: KinematicPreparation
    times: np.ndarray
    tolerances: Tolerances
    format: str
    out: Optional[str]
    raw: dict


def merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            # a new density/preparation kind replaces the old block wholesale
            if "kind" in value and value["kind"] != out[key].get("kind"):
                out[key] = copy.deepcopy(value)
            else:
                out[key] = merge(out[key], value)
        else:
            out[key] = value
    return out


def load_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def build(raw: dict) -> RunConfig:
    raw = merge(DEFAULTS, raw)
    tol_cfg = raw["tolerances"]
    try:
        tol = Tolerances(rel_tol=float(tol_cfg["rel_tol"]), abs_tol=float(tol_cfg["abs_tol"]),
                         **({"max_panels": int(tol_cfg["max_panels"])} if "max_panels" in tol_cfg else {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad tolerances: {exc}") from None
    if not (tol.rel_tol > 0 and tol.abs_tol > 0 and tol.max_panels > 0):
        raise ConfigError("tolerances must be positive")
    if raw["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {raw['format']!r}")
    return RunConfig(density_from_config(raw["density"]), preparation_from_config(raw["preparation"]),
                     grid_from_config(raw["grid"]), tol, raw["format"], raw["out"], raw)
