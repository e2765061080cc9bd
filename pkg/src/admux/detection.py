"""Bit-conditioned Gaussian statistics, ML thresholds and bit error probability.

Channels are indexed from 0. Each channel's estimate depends on the bits of
every other channel through the shared total concentration and the ratio
estimator, so conditional moments average over all interfering bit patterns
with equal weight.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .channel import ChannelConfig, received_concentrations
from .errors import (
    ConfigError,
    InvalidMomentsError,
    NonSeparableSymbolsError,
    TooManyChannelsError,
)
from .estimation import concentration_moments
from .kinetics import LigandPanel, SeparationMatrix

VARIANCE_MODES = ("paper", "full")
DEFAULT_MAX_CHANNELS = 20
EQUAL_VARIANCE_RTOL = 1e-9


@dataclass(frozen=True)
class GaussianMoments:
    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance >= 0:
            raise InvalidMomentsError(f"variance must be nonnegative, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class ChannelDecision:
    threshold: float
    bep: float
    moments0: GaussianMoments
    moments1: GaussianMoments


def _check_mode(variance_mode):
    if variance_mode not in VARIANCE_MODES:
        raise ConfigError(f"variance_mode must be one of {VARIANCE_MODES}, got {variance_mode!r}")


def _check_enumeration(M, max_channels):
    if M > max_channels:
        raise TooManyChannelsError(
            f"M={M} exceeds the enumeration ceiling of {max_channels} channels "
            f"(2^(M-1) interfering bit patterns)"
        )


def all_symbol_vectors(M) -> np.ndarray:
    """Every length-M bit vector, shape ``(2**M, M)``, in lexicographic order."""
    return np.array(list(itertools.product((0, 1), repeat=M)), dtype=np.int8).reshape(-1, M)


def _combine(means, variances, variance_mode):
    mean = float(np.mean(means))
    var = float(np.mean(variances))
    if variance_mode == "full":
        var += float(np.mean((means - mean) ** 2))
    return GaussianMoments(mean, var)


def conditional_moments(
    channel_index,
    bit,
    panel: LigandPanel,
    sep: SeparationMatrix,
    cfg: ChannelConfig,
    N_R,
    variance_mode="paper",
    max_channels=DEFAULT_MAX_CHANNELS,
) -> GaussianMoments:
    """Moments of channel ``channel_index``'s estimate given its own bit.

    ``paper`` mode averages the per-pattern variances; ``full`` mode also adds
    the spread of the per-pattern means (complete law of total variance).
    """
    _check_mode(variance_mode)
    M = panel.M
    _check_enumeration(M, max_channels)
    if not 0 <= channel_index < M:
        raise ConfigError(f"channel_index must be in [0, {M}), got {channel_index}")
    if bit not in (0, 1):
        raise ConfigError(f"bit must be 0 or 1, got {bit}")
    means, variances = [], []
    for others in itertools.product((0, 1), repeat=M - 1):
        s = np.insert(np.array(others, dtype=np.int8), channel_index, bit)
        m = concentration_moments(received_concentrations(s, cfg), panel, sep, N_R)
        means.append(m.mean[channel_index])
        variances.append(m.variance[channel_index])
    return _combine(np.array(means), np.array(variances), variance_mode)


def optimal_threshold(m0: GaussianMoments, m1: GaussianMoments) -> float:
    """Threshold where the two equally likely Gaussian densities cross.

    Evaluated in a cancellation-free rearrangement relative to ``m0.mean``;
    algebraically identical to the textbook quadratic-root expression.
    """
    v0, v1 = m0.variance, m1.variance
    if not (v0 > 0 and v1 > 0):
        raise InvalidMomentsError(f"variances must be positive, got {v0}, {v1}")
    delta = m1.mean - m0.mean
    if not delta > 0:
        raise NonSeparableSymbolsError(
            f"bit-1 mean {m1.mean} must exceed bit-0 mean {m0.mean}"
        )
    gamma = v1 - v0
    if abs(gamma) < EQUAL_VARIANCE_RTOL * max(v0, v1):
        return 0.5 * (m0.mean + m1.mean)
    log_ratio = math.log(v1 / v0)
    radicand = delta**2 + gamma * log_ratio
    if radicand < 0:
        return _golden_section_threshold(m0, m1)
    root = math.sqrt(v0) * math.sqrt(v1) * math.sqrt(radicand)
    return m0.mean + v0 * (delta**2 + v1 * log_ratio) / (root + v0 * delta)


def _golden_section_threshold(m0, m1, rtol=1e-12) -> float:
    lo, hi = m0.mean, m1.mean
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    f = lambda lam: channel_bep(m0, m1, lam)
    a, b = lo + (1 - inv_phi) * (hi - lo), lo + inv_phi * (hi - lo)
    fa, fb = f(a), f(b)
    while hi - lo > rtol * max(abs(lo), abs(hi), 1e-300):
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = lo + (1 - inv_phi) * (hi - lo)
            fa = f(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + inv_phi * (hi - lo)
            fb = f(b)
    return 0.5 * (lo + hi)


def channel_bep(m0: GaussianMoments, m1: GaussianMoments, lam) -> float:
    """Error probability of the rule "decide 1 iff estimate > lam" with equal priors."""
    if not (m0.variance > 0 and m1.variance > 0):
        raise InvalidMomentsError("variances must be positive")
    false_alarm = erfc((lam - m0.mean) / math.sqrt(2.0 * m0.variance))
    miss = erfc((m1.mean - lam) / math.sqrt(2.0 * m1.variance))
    return float(0.25 * (false_alarm + miss))


def channel_decisions(
    panel: LigandPanel,
    sep: SeparationMatrix,
    cfg: ChannelConfig,
    N_R,
    variance_mode="paper",
    max_channels=DEFAULT_MAX_CHANNELS,
) -> list[ChannelDecision]:
    """Threshold and BEP for every channel.

    Moments are computed once per full symbol vector and then grouped by each
    channel's own bit, which is equivalent to calling
    :func:`conditional_moments` per channel and bit.
    """
    _check_mode(variance_mode)
    M = panel.M
    _check_enumeration(M, max_channels)
    symbols = all_symbol_vectors(M)
    means = np.empty(symbols.shape)
    variances = np.empty(symbols.shape)
    for row, s in enumerate(symbols):
        m = concentration_moments(received_concentrations(s, cfg), panel, sep, N_R)
        means[row], variances[row] = m.mean, m.variance
    decisions = []
    for i in range(M):
        given = [symbols[:, i] == b for b in (0, 1)]
        m0, m1 = (_combine(means[g, i], variances[g, i], variance_mode) for g in given)
        lam = optimal_threshold(m0, m1)
        decisions.append(ChannelDecision(lam, channel_bep(m0, m1, lam), m0, m1))
    return decisions


def mean_bep(panel, sep, cfg, N_R, variance_mode="paper", max_channels=DEFAULT_MAX_CHANNELS):
    """Per-channel BEP vector and its arithmetic mean over channels."""
    decisions = channel_decisions(panel, sep, cfg, N_R, variance_mode, max_channels)
    beps = np.array([d.bep for d in decisions])
    return beps, float(np.mean(beps))


def mixture_bep(panel, sep, cfg, N_R, thresholds, max_channels=DEFAULT_MAX_CHANNELS):
    """Per-channel BEP at fixed thresholds when each estimate is modelled as a
    Gaussian per full symbol vector, i.e. a 2^(M-1)-component mixture per bit,
    instead of one Gaussian with averaged variance.

    Diagnostic only: it shows how much of the gap between the single-Gaussian
    BEP and the Monte Carlo error rate comes from collapsing the mixture.
    """
    M = panel.M
    _check_enumeration(M, max_channels)
    lam = np.asarray(thresholds, dtype=float)
    symbols = all_symbol_vectors(M)
    total = np.zeros(M)
    for s in symbols:
        m = concentration_moments(received_concentrations(s, cfg), panel, sep, N_R)
        z = (lam - m.mean) / np.sqrt(2.0 * m.variance)
        total += np.where(s == 1, 0.5 * erfc(-z), 0.5 * erfc(z))
    return total / len(symbols)
