"""Pipeline configuration: one dataclass, loadable from TOML or JSON.

The file is the source of truth; CLI flags override individual keys.  The
processing subset (everything except paths) is embedded into derived
artifacts so a result always carries the settings that produced it.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:          # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError

_PATH_FIELDS = ("records_dir", "artifacts_dir")


@dataclass
class PipelineConfig:
    window_s: float = 5.0
    hop_s: float = 0.125
    window_fn: str = "hann"            # hann | rect
    f_max_hz: float = 16.0
    m: int = 80                        # frequency bins per channel
    weighting: str = "magnitude"       # magnitude | power
    K: int = 5
    alpha: float | None = None         # None -> 1/K
    eta: float | None = None           # None -> 1/K
    max_iter: int = 100
    tol: float = 1e-6
    seed: int = 0
    ridge: float = 1e-6
    records_dir: str | None = None
    artifacts_dir: str | None = None

    def __post_init__(self):
        problems = []
        if self.window_s <= 0 or self.hop_s <= 0:
            problems.append("window_s and hop_s must be > 0")
        if self.window_fn not in ("hann", "rect"):
            problems.append(f"window_fn must be hann or rect, got {self.window_fn!r}")
        if self.weighting not in ("magnitude", "power"):
            problems.append(f"weighting must be magnitude or power, got {self.weighting!r}")
        if self.f_max_hz <= 0:
            problems.append("f_max_hz must be > 0")
        if self.m < 1:
            problems.append("m must be >= 1")
        if self.K < 1:
            problems.append("K must be >= 1")
        if self.ridge <= 0:
            problems.append("ridge must be > 0")
        if problems:
            raise ConfigError("; ".join(problems))

    def processing_dict(self) -> dict:
        """All settings except local paths; safe to embed in artifacts."""
        d = dataclasses.asdict(self)
        for key in _PATH_FIELDS:
            d.pop(key)
        return d

    def replace(self, **overrides) -> "PipelineConfig":
        return dataclasses.replace(self, **overrides)


def load_config(path) -> PipelineConfig:
    path = Path(path)
    if path.suffix.lower() == ".toml":
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    elif path.suffix.lower() == ".json":
        raw = json.loads(path.read_text())
    else:
        raise ConfigError(f"config must be .toml or .json, got {path.name!r}")
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> PipelineConfig:
    known = set(PipelineConfig.__dataclass_fields__)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return PipelineConfig(**raw)
