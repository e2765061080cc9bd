"""Ligand panel and receptor binding statistics.

Units used throughout the package: lengths in um, times in s, concentrations
in molecules/um^3, so ``k_on`` is in um^3/s and ``k_off`` in 1/s.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConfigError, IllConditionedError

DEFAULT_K_ON = 0.1
DEFAULT_K_OFF_BASE = 10.0
DEFAULT_V = 3.0
DEFAULT_COND_CEILING = 1e12


@dataclass(frozen=True)
class LigandPanel:
    """The M ligand types sharing one promiscuous receptor.

    Ligands are ordered by increasing affinity, i.e. strictly decreasing
    ``k_off``, with a constant ratio ``gamma`` between neighbours.
    """

    k_on: float
    k_off: np.ndarray
    gamma: float
    v: float = DEFAULT_V

    def __post_init__(self):
        k_off = np.array(self.k_off, dtype=float, copy=True)
        if k_off.ndim != 1 or k_off.size < 1:
            raise ConfigError("k_off must be a non-empty 1-D vector")
        if not (self.k_on > 0 and self.v > 0):
            raise ConfigError(f"k_on and v must be positive (k_on={self.k_on}, v={self.v})")
        if not self.gamma > 1:
            raise ConfigError(f"gamma must exceed 1, got {self.gamma}")
        if np.any(k_off <= 0) or not np.all(np.isfinite(k_off)):
            raise ConfigError("unbinding rates must be positive and finite")
        if k_off.size > 1:
            ratios = k_off[:-1] / k_off[1:]
            if not np.allclose(ratios, self.gamma, rtol=1e-12, atol=0.0):
                raise ConfigError(
                    "k_off must be geometric with ratio gamma between consecutive ligands"
                )
        k_off.flags.writeable = False
        object.__setattr__(self, "k_off", k_off)

    @property
    def M(self) -> int:
        return int(self.k_off.size)

    @property
    def dissociation_constants(self) -> np.ndarray:
        return self.k_off / self.k_on


def build_panel(M, k_on=DEFAULT_K_ON, k_off_base=DEFAULT_K_OFF_BASE, gamma=5.0, v=DEFAULT_V) -> LigandPanel:
    """Geometric panel: ``k_off[i] = k_off_base / gamma**i``."""
    if int(M) != M or M < 1:
        raise ConfigError(f"M must be a positive integer, got {M}")
    for name, val in (("k_on", k_on), ("k_off_base", k_off_base), ("v", v)):
        if not val > 0:
            raise ConfigError(f"{name} must be positive, got {val}")
    if not gamma > 1:
        raise ConfigError(f"gamma must exceed 1, got {gamma}")
    k_off = float(k_off_base) / float(gamma) ** np.arange(int(M))
    return LigandPanel(k_on=float(k_on), k_off=k_off, gamma=float(gamma), v=float(v))


def bound_probability(panel: LigandPanel, c) -> float:
    """Equilibrium probability that a receptor is bound in a ligand mixture."""
    c = np.asarray(c, dtype=float)
    if c.shape != (panel.M,):
        raise ConfigError(f"expected {panel.M} concentrations, got shape {c.shape}")
    if np.any(c < 0):
        raise ConfigError("concentrations must be nonnegative")
    x = float(np.sum(c / panel.dissociation_constants))
    return x / (1.0 + x)


def interval_thresholds(panel: LigandPanel) -> np.ndarray:
    """Bin edges ``[0, v/k_off[0], ..., v/k_off[M-2], inf]`` for bound durations."""
    return np.concatenate(([0.0], panel.v / panel.k_off[:-1], [np.inf]))


@dataclass(frozen=True)
class SeparationMatrix:
    """Maps ligand ratios to interval probabilities, ``p = S @ alpha``."""

    S: np.ndarray
    W: np.ndarray
    condition_number: float
    lu: tuple = field(repr=False, compare=False, default=None)

    @property
    def M(self) -> int:
        return self.S.shape[0]


def separation_matrix(panel: LigandPanel, cond_ceiling=DEFAULT_COND_CEILING) -> SeparationMatrix:
    T = interval_thresholds(panel)
    k = panel.k_off
    # exp(-k * inf) evaluates to 0, closing the last interval
    S = np.exp(-np.outer(T[:-1], k)) - np.exp(-np.outer(T[1:], k))
    cond = float(np.linalg.cond(S))
    if not np.isfinite(cond) or cond > cond_ceiling:
        raise IllConditionedError(panel.gamma, panel.M, cond, cond_ceiling)
    lu = scipy.linalg.lu_factor(S)
    W = scipy.linalg.lu_solve(lu, np.eye(panel.M))
    # one refinement step; keeps |W S - I| below 1e-9 up to cond ~ 1e9
    W = W + (np.eye(panel.M) - W @ S) @ W
    S.flags.writeable = False
    W.flags.writeable = False
    return SeparationMatrix(S=S, W=W, condition_number=cond, lu=lu)
