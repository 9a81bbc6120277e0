"""Run configuration: JSON loading, validation with field-precise errors,
and stable hashing for report provenance."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParameterError
from .model import MarketParams, SurvivalModel, survival_model_from_dict

__all__ = ["RunConfig", "ConfigError", "load_config", "default_config_dict",
           "config_hash"]


class ConfigError(Exception):
    """Invalid or missing configuration; CLI maps this to exit code 2."""


DEFAULTS = {
    "market": {"r": 0.03, "alpha": 0.07, "sigma": 0.2, "mu": 0.05,
               "delta": 0.02, "eta": 0.3, "rho": 0.4, "a": 1.0},
    "survival": {"kind": "exponential", "kappa": 0.25},
    "utility": {"kind": "EXPn", "a": 1.0},
    "reduction": {"case": "H4", "omega": None},
    "grid": {"z_span": [-6.0, 8.0], "h_min": 0.25, "h_max": 6.0,
             "n_z": 96, "n_h": 64, "z_center": "auto"},
    "solver": {"tol_rel": 1e-6, "tol_abs": None, "max_iter": 40},
    "mc": {"n_paths": 20000, "dt": 0.01, "t_max": 30.0, "l0": 1.0,
           "h0": 1.0, "baseline_c": 0.5, "baseline_q": 0.05},
    "seed": 1234,
    "out_dir": ".",
}


def default_config_dict() -> dict:
    return json.loads(json.dumps(DEFAULTS))


def _merge(base: dict, override: dict, path=""):
    out = dict(base)
    for k, v in override.items():
        if k not in base:
            raise ConfigError(f"unknown config key '{path}{k}'")
        if isinstance(base[k], dict):
            if not isinstance(v, dict):
                raise ConfigError(f"config key '{path}{k}' must be an object")
            out[k] = _merge(base[k], v, path=f"{path}{k}.")
        else:
            out[k] = v
    return out


@dataclass
class RunConfig:
    market: MarketParams
    survival: SurvivalModel
    raw: dict = field(repr=False)

    @property
    def seed(self) -> int:
        return int(self.raw["seed"])

    @property
    def omega(self):
        return self.raw["reduction"]["omega"]

    @property
    def case(self) -> str:
        return self.raw["reduction"]["case"]

    @property
    def out_dir(self) -> Path:
        return Path(self.raw["out_dir"])

    def resolved_omega(self) -> float:
        from .reduction import h4_default_omega

        om = self.omega
        return h4_default_omega(self.market, self.survival) if om is None \
            else float(om)

    def grid(self, t0: float = 0.0):
        from .reduction import z_offset
        from .solver import Grid2D

        g = self.raw["grid"]
        if g["z_center"] == "auto":
            zc = (self.raw["mc"]["l0"]
                  + z_offset(self.market, self.survival, t0))
        else:
            zc = float(g["z_center"])
        return Grid2D(zc + g["z_span"][0], zc + g["z_span"][1],
                      g["h_min"], g["h_max"], g["n_z"], g["n_h"])


def _build(raw: dict) -> RunConfig:
    try:
        market = MarketParams.from_dict(raw["market"])
    except ParameterError as e:
        raise ConfigError(f"market: {e}") from e
    try:
        survival = survival_model_from_dict(raw["survival"])
    except ParameterError as e:
        raise ConfigError(f"survival: {e}") from e
    if raw["utility"]["kind"] not in ("EXPn", "EXPp", "HARA1", "HARA2", "LOG"):
        raise ConfigError(f"utility.kind: unknown kind {raw['utility']['kind']!r}")
    if not raw["mc"]["n_paths"] >= 1:
        raise ConfigError("mc.n_paths: must be at least 1")
    for name in ("dt", "t_max"):
        if not raw["mc"][name] > 0:
            raise ConfigError(f"mc.{name}: must be positive")
    return RunConfig(market=market, survival=survival, raw=raw)


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    raw = default_config_dict()
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            user = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"{p}: invalid JSON at line {e.lineno}, "
                              f"column {e.colno}: {e.msg}") from e
        raw = _merge(raw, user)
    if overrides:
        raw = _merge(raw, overrides)
    return _build(raw)


def config_hash(cfg: RunConfig) -> str:
    blob = json.dumps(cfg.raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
