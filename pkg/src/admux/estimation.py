"""Concentration estimators built from receptor bound/unbound durations.

The total concentration comes from the summed unbound time, the ligand
ratios from counting bound durations per threshold interval. Estimator
functions accept a leading batch axis so the Monte Carlo driver can run
whole blocks of trials through the same code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    DegenerateChannelError,
    InconsistentCountsError,
    InsufficientReceptorsError,
)
from .kinetics import LigandPanel, SeparationMatrix


@dataclass(frozen=True)
class EstimatorMoments:
    mean: np.ndarray
    variance: np.ndarray


@dataclass(frozen=True)
class TrialObservation:
    """One observation window: a single bound and unbound period per receptor."""

    bound_durations: np.ndarray
    total_unbound_time: float
    interval_counts: np.ndarray

    def __post_init__(self):
        if not self.total_unbound_time > 0:
            raise ConfigError(f"total unbound time must be positive, got {self.total_unbound_time}")
        if int(np.sum(self.interval_counts)) != len(self.bound_durations):
            raise InconsistentCountsError("interval counts must sum to the number of receptors")

    @property
    def N_R(self) -> int:
        return len(self.bound_durations)


def _check_receptors(N_R):
    if N_R <= 2:
        raise InsufficientReceptorsError(f"need N_R > 2 receptors, got {N_R}")


def estimate_total_concentration(T_u, N_R, k_on):
    """Unbiased estimate ``(N_R - 1) / (k_on * T_u)``; ``T_u`` may be an array."""
    _check_receptors(N_R)
    T_u = np.asarray(T_u, dtype=float)
    if np.any(~(T_u > 0)):
        raise ConfigError("total unbound time must be positive")
    out = (N_R - 1) / (k_on * T_u)
    return float(out) if out.ndim == 0 else out


def total_concentration_moments(c_tot, N_R):
    _check_receptors(N_R)
    if c_tot < 0:
        raise ConfigError("total concentration must be nonnegative")
    return float(c_tot), c_tot**2 / (N_R - 2)


def interval_probabilities(sep: SeparationMatrix, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (sep.M,) or np.any(alpha < 0) or abs(alpha.sum() - 1.0) > 1e-9:
        raise ConfigError(f"alpha must be a length-{sep.M} probability vector, got {alpha}")
    return sep.S @ alpha


def count_moments(p, N_R):
    """Mean and covariance of multinomial interval counts."""
    p = np.asarray(p, dtype=float)
    cov = -np.outer(p, p) * N_R
    cov[np.diag_indices_from(cov)] = p * (1.0 - p) * N_R
    return p * N_R, cov


def estimate_ratios(sep: SeparationMatrix, n, N_R) -> np.ndarray:
    """Method-of-moments ratio estimate ``W @ n / N_R``, returned unclamped.

    ``n`` has shape ``(M,)`` or ``(batch, M)``.
    """
    n = np.asarray(n)
    if n.shape[-1] != sep.M:
        raise ConfigError(f"expected {sep.M} interval counts, got shape {n.shape}")
    if N_R <= 0 or np.any(n.sum(axis=-1) != N_R):
        raise InconsistentCountsError(f"interval counts must sum to N_R={N_R}")
    return (n @ sep.W.T) / N_R


def ratio_moments(sep: SeparationMatrix, alpha, N_R):
    alpha = np.asarray(alpha, dtype=float)
    p = interval_probabilities(sep, alpha)
    _, cov = count_moments(p, N_R)
    W = sep.W
    # Var[a_l] = w_l^T Cov w_l / N_R^2 for every row l of W
    var = np.einsum("li,ij,lj->l", W, cov, W) / N_R**2
    return alpha.copy(), np.maximum(var, 0.0)


def estimate_concentrations(obs: TrialObservation, panel: LigandPanel, sep: SeparationMatrix) -> np.ndarray:
    c_tot = estimate_total_concentration(obs.total_unbound_time, obs.N_R, panel.k_on)
    return c_tot * estimate_ratios(sep, obs.interval_counts, obs.N_R)


def concentration_moments(c, panel: LigandPanel, sep: SeparationMatrix, N_R) -> EstimatorMoments:
    """Closed-form mean and variance of the per-ligand concentration estimate.

    Treats the total-concentration and ratio estimators as independent, which
    holds because they are built from disjoint unbound and bound durations.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (panel.M,) or np.any(c < 0):
        raise ConfigError("concentration vector must be nonnegative with one entry per ligand")
    c_tot = float(c.sum())
    if c_tot == 0:
        raise DegenerateChannelError("total concentration is zero; ligand ratios undefined")
    mean_tot, var_tot = total_concentration_moments(c_tot, N_R)
    alpha = c / c_tot
    mean_a, var_a = ratio_moments(sep, alpha, N_R)
    var = var_tot * var_a + var_tot * mean_a**2 + var_a * mean_tot**2
    return EstimatorMoments(mean=c.copy(), variance=var)
