"""B-CSK transmitter and the diffusion channel sampled at its peak."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class ChannelConfig:
    """Distance in um and molecule counts released for bit-0 / bit-1.

    ``N1 == N0`` is accepted so the Monte Carlo driver can run the
    indistinguishable-symbol control case; the analytical detector rejects it.
    """

    r: float = 20.0
    N0: float = 2e5
    N1: float = 1e6

    def __post_init__(self):
        if not self.r > 0:
            raise ConfigError(f"distance r must be positive, got {self.r}")
        if not (self.N0 >= 0 and self.N1 >= self.N0):
            raise ConfigError(f"need N1 >= N0 >= 0, got N0={self.N0}, N1={self.N1}")


def symbol_vector(bits, M=None) -> np.ndarray:
    """Validate a bit vector (one bit per channel); returns an int8 array."""
    s = np.asarray(bits)
    if s.ndim != 1 or not np.all((s == 0) | (s == 1)):
        raise ConfigError(f"symbol vector must be a 1-D array of 0/1 bits, got {bits!r}")
    if M is not None and s.size != M:
        raise ConfigError(f"symbol vector has {s.size} bits, panel has {M} channels")
    return s.astype(np.int8)


def peak_cir(r) -> float:
    """Peak value of the point-source impulse response at distance ``r`` (um^-3)."""
    if not r > 0:
        raise ConfigError(f"distance r must be positive, got {r}")
    return (2.0 * math.pi * r**2 / 3.0) ** -1.5 * math.exp(-1.5)


def transmit_vector(s, cfg: ChannelConfig) -> np.ndarray:
    s = np.asarray(s)
    return np.where(s == 1, float(cfg.N1), float(cfg.N0))


def received_concentrations(s, cfg: ChannelConfig) -> np.ndarray:
    """Concentration of each ligand at the receptors; ``s`` may be batched ``(trials, M)``."""
    return peak_cir(cfg.r) * transmit_vector(s, cfg)
