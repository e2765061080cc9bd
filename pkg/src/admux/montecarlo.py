"""Event-level Monte Carlo of the multiplexed link.

Every receptor contributes one unbound period, drawn from the exponential
waiting time to the next binding event, and one bound period, whose ligand
identity is chosen in proportion to concentration (all ligands share
``k_on``) and whose length is exponential in that ligand's ``k_off``. The
draws are pushed through the same estimators the analytical model
describes and thresholded with the analytical ML thresholds.

Trials are grouped into fixed-size blocks. Block ``b`` draws from a Philox
stream keyed by ``SeedSequence(seed, spawn_key=(b,))``, so results depend
only on ``(seed, trials, system)`` and never on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelConfig, received_concentrations, symbol_vector
from .detection import channel_decisions
from .errors import ConfigError, DegenerateChannelError
from .estimation import TrialObservation, estimate_ratios, estimate_total_concentration
from .kinetics import LigandPanel, SeparationMatrix, interval_thresholds, separation_matrix

RECEPTOR_DRAWS_PER_BLOCK = 2_000_000


@dataclass(frozen=True)
class TrialConfig:
    seed: int
    trials: int
    panel: LigandPanel
    channel: ChannelConfig
    N_R: int

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.N_R <= 2:
            raise ConfigError(f"N_R must exceed 2, got {self.N_R}")

    @classmethod
    def from_system(cls, system, trials, seed=0) -> "TrialConfig":
        return cls(seed=seed, trials=trials, panel=system.panel(), channel=system.channel(), N_R=system.N_R)


@dataclass(frozen=True)
class TrialResult:
    bit_errors: np.ndarray
    estimates: np.ndarray
    true_bits: np.ndarray
    total_estimates: np.ndarray
    ratio_estimates: np.ndarray
    thresholds: np.ndarray = field(default=None)

    @property
    def trials(self) -> int:
        return self.bit_errors.shape[0]


def trials_per_block(N_R) -> int:
    return max(1, RECEPTOR_DRAWS_PER_BLOCK // N_R)


def block_rng(seed, block) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _sample_block(c, panel: LigandPanel, N_R, rng, keep_durations=False):
    """Draw one observation window per row of ``c`` (shape ``(B, M)``).

    Returns ``(T_u, counts, bound_durations)``; durations are None unless kept.
    """
    B, M = c.shape
    c_tot = c.sum(axis=1)
    if np.any(c_tot <= 0):
        raise DegenerateChannelError("no ligands present; receptors never bind")
    T_u = rng.standard_exponential((B, N_R)).sum(axis=1) / (panel.k_on * c_tot)

    edges = np.cumsum(c / c_tot[:, None], axis=1)[:, :-1]
    u = rng.random((B, N_R))
    ligand = (u[:, :, None] >= edges[:, None, :]).sum(axis=2)
    tau_b = rng.standard_exponential((B, N_R)) / panel.k_off[ligand]

    interior = interval_thresholds(panel)[1:-1]
    interval = np.searchsorted(interior, tau_b, side="right")
    flat = interval + M * np.arange(B)[:, None]
    counts = np.bincount(flat.ravel(), minlength=B * M).reshape(B, M)
    return T_u, counts, (tau_b if keep_durations else None)


def sample_observation(c, panel: LigandPanel, N_R, rng) -> TrialObservation:
    c = np.asarray(c, dtype=float)
    if c.shape != (panel.M,) or np.any(c < 0):
        raise ConfigError("concentration vector must be nonnegative with one entry per ligand")
    if N_R <= 2:
        raise ConfigError(f"N_R must exceed 2, got {N_R}")
    T_u, counts, tau_b = _sample_block(c[None, :], panel, N_R, rng, keep_durations=True)
    return TrialObservation(bound_durations=tau_b[0], total_unbound_time=float(T_u[0]), interval_counts=counts[0])


def _run_block(cfg: TrialConfig, sep: SeparationMatrix, thresholds, fixed_bits, block):
    per_block = trials_per_block(cfg.N_R)
    start = block * per_block
    B = min(per_block, cfg.trials - start)
    rng = block_rng(cfg.seed, block)
    M = cfg.panel.M
    if fixed_bits is None:
        bits = rng.integers(0, 2, size=(B, M), dtype=np.int8)
    else:
        bits = np.broadcast_to(fixed_bits, (B, M)).copy()
    c = received_concentrations(bits, cfg.channel)
    T_u, counts, _ = _sample_block(c, cfg.panel, cfg.N_R, rng)
    c_tot_hat = estimate_total_concentration(T_u, cfg.N_R, cfg.panel.k_on)
    alpha_hat = estimate_ratios(sep, counts, cfg.N_R)
    estimates = c_tot_hat[:, None] * alpha_hat
    decided = (estimates > thresholds).astype(np.int8)
    return bits, estimates, c_tot_hat, alpha_hat, (decided != bits).astype(np.int8)


def run_trials(cfg: TrialConfig, variance_mode="paper", workers=1, thresholds=None, fixed_bits=None) -> TrialResult:
    """Simulate ``cfg.trials`` independent symbol transmissions.

    Bits are uniform per channel unless ``fixed_bits`` pins one symbol vector.
    ``thresholds`` overrides the analytical ML thresholds, e.g. when the two
    symbols are identical and no ML threshold exists.
    """
    sep = separation_matrix(cfg.panel)
    if thresholds is None:
        decisions = channel_decisions(cfg.panel, sep, cfg.channel, cfg.N_R, variance_mode)
        thresholds = np.array([d.threshold for d in decisions])
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.shape != (cfg.panel.M,):
        raise ConfigError(f"expected {cfg.panel.M} thresholds")
    if fixed_bits is not None:
        fixed_bits = symbol_vector(fixed_bits, cfg.panel.M)

    n_blocks = math.ceil(cfg.trials / trials_per_block(cfg.N_R))
    args = (cfg, sep, thresholds, fixed_bits)
    if workers > 1 and n_blocks > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, *zip(*[args] * n_blocks), range(n_blocks)))
    else:
        parts = [_run_block(*args, b) for b in range(n_blocks)]
    bits, est, tot, ratios, errors = (np.concatenate(col) for col in zip(*parts))
    return TrialResult(
        bit_errors=errors,
        estimates=est,
        true_bits=bits,
        total_estimates=tot,
        ratio_estimates=ratios,
        thresholds=thresholds,
    )


def binomial_half_width(p, n, k=3.0):
    """``k``-sigma half-width of a binomial proportion estimated from ``n`` draws."""
    return k * np.sqrt(np.asarray(p) * (1.0 - np.asarray(p)) / n)


def empirical_bep(result: TrialResult):
    """Per-channel error rates, their mean, and per-channel 3-sigma half-widths."""
    rates = result.bit_errors.mean(axis=0)
    return rates, float(rates.mean()), binomial_half_width(rates, result.trials)
