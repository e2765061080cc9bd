"""Experiment parameterization and its flat TOML config-file form."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

import tomli

from .channel import ChannelConfig
from .detection import VARIANCE_MODES
from .errors import ConfigError
from .kinetics import DEFAULT_K_OFF_BASE, DEFAULT_K_ON, DEFAULT_V, build_panel, separation_matrix


@dataclass(frozen=True)
class SystemConfig:
    N_R: int = 1000
    N_C: int = 5
    gamma: float = 5.0
    r: float = 20.0
    N0: float = 2e5
    N1: float = 1e6
    v: float = DEFAULT_V
    k_on: float = DEFAULT_K_ON
    k_off_base: float = DEFAULT_K_OFF_BASE
    variance_mode: str = "paper"

    def __post_init__(self):
        for name in ("N_R", "N_C"):
            val = getattr(self, name)
            if isinstance(val, bool) or int(val) != val:
                raise ConfigError(f"{name} must be an integer, got {val!r}")
            object.__setattr__(self, name, int(val))
        if self.N_R <= 2:
            raise ConfigError(f"N_R must exceed 2, got {self.N_R}")
        if self.N_C < 1:
            raise ConfigError(f"N_C must be at least 1, got {self.N_C}")
        if self.variance_mode not in VARIANCE_MODES:
            raise ConfigError(f"variance_mode must be one of {VARIANCE_MODES}")
        # delegate range checks to the component constructors
        self.panel()
        self.channel()

    def panel(self):
        return build_panel(self.N_C, self.k_on, self.k_off_base, self.gamma, self.v)

    def channel(self) -> ChannelConfig:
        return ChannelConfig(r=self.r, N0=self.N0, N1=self.N1)

    def separation(self):
        return separation_matrix(self.panel())

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_mapping(cls, values: dict) -> "SystemConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path, **overrides) -> "SystemConfig":
        """Read a flat ``key = value`` TOML file; non-None overrides win."""
        try:
            with open(Path(path), "rb") as fh:
                values = tomli.load(fh)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        nested = [k for k, v in values.items() if isinstance(v, dict)]
        if nested:
            raise ConfigError(f"config must be flat key-value pairs; found tables {nested}")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_mapping(values)
