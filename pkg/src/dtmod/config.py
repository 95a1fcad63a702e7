"""Run configuration: resolution knobs shared by the numeric layers.

Settings travel as a single :class:`RunConfig`.  JSON config files use dotted
keys (``quad.panels``, ``ls.depth``, ``ls.tol``, ``mod.hgrid``, ``mod.xgrid``,
``approx.iters``, ``approx.restarts``, ``approx.seed``); unknown keys are an
error so typos fail loudly.  The seed may also be set through the
``DTMOD_SEED`` environment variable, which loses to an explicit config value.
"""

from __future__ import annotations

import dataclasses
import json
import os

from .errors import ConfigError

_KEYMAP = {
    "quad.panels": "quad_panels",
    "ls.depth": "ls_depth",
    "ls.tol": "ls_tol",
    "mod.hgrid": "h_points",
    "mod.xgrid": "inf_samples",
    "approx.iters": "approx_iters",
    "approx.restarts": "approx_restarts",
    "approx.seed": "seed",
}


@dataclasses.dataclass
class RunConfig:
    quad_panels: int = 256
    ls_depth: int = 16
    ls_tol: float = 1e-4
    h_points: int = 40
    inf_samples: int = 4096
    approx_iters: int = 60
    approx_restarts: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.quad_panels < 64:
            raise ConfigError("quad.panels must be at least 64")
        if not 1 <= self.ls_depth <= 24:
            raise ConfigError("ls.depth must lie in [1, 24]")
        if self.ls_tol <= 0:
            raise ConfigError("ls.tol must be positive")
        if self.h_points < 2:
            raise ConfigError("mod.hgrid must be at least 2")
        if self.inf_samples < 64:
            raise ConfigError("mod.xgrid must be at least 64")
        if self.approx_iters < 1 or self.approx_restarts < 0:
            raise ConfigError("approx.iters must be >= 1 and approx.restarts >= 0")

    def replace(self, **kw) -> "RunConfig":
        return dataclasses.replace(self, **kw)


def from_mapping(data: dict, base: RunConfig | None = None) -> RunConfig:
    """Build a RunConfig from a dotted-key mapping, over ``base`` defaults."""
    cfg = dataclasses.asdict(base) if base is not None else dataclasses.asdict(RunConfig())
    for key, value in data.items():
        field = _KEYMAP.get(key)
        if field is None:
            raise ConfigError(f"unknown config key: {key!r}")
        cfg[field] = value
    try:
        return RunConfig(**cfg)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load(path: str, base: RunConfig | None = None) -> RunConfig:
    """Read a JSON config file with dotted keys."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return from_mapping(data, base)


def default() -> RunConfig:
    """Defaults, honoring DTMOD_SEED when set and a valid integer."""
    cfg = RunConfig()
    env_seed = os.environ.get("DTMOD_SEED")
    if env_seed is not None:
        try:
            cfg = cfg.replace(seed=int(env_seed))
        except ValueError as exc:
            raise ConfigError(f"DTMOD_SEED must be an integer, got {env_seed!r}") from exc
    return cfg
