"""Affinity-division multiplexing for molecular communication receivers.

Analytical bit error probability of a multiplexed B-CSK link read out by a
single promiscuous receptor type, plus an event-level Monte Carlo oracle.
"""

from .channel import ChannelConfig, peak_cir, received_concentrations, transmit_vector
from .config import SystemConfig
from .detection import (
    ChannelDecision,
    GaussianMoments,
    channel_bep,
    channel_decisions,
    conditional_moments,
    mean_bep,
    optimal_threshold,
)
from .estimation import (
    EstimatorMoments,
    TrialObservation,
    concentration_moments,
    estimate_concentrations,
    estimate_ratios,
    estimate_total_concentration,
)
from .kinetics import LigandPanel, SeparationMatrix, build_panel, interval_thresholds, separation_matrix
from .montecarlo import TrialConfig, TrialResult, empirical_bep, run_trials, sample_observation

__version__ = "0.1.0"
