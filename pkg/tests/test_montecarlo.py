import numpy as np
import pytest

from admux import SystemConfig, build_panel, separation_matrix
from admux.channel import ChannelConfig, peak_cir, received_concentrations
from admux.detection import mean_bep
from admux.errors import ConfigError, DegenerateChannelError
from admux.montecarlo import (
    TrialConfig,
    TrialResult,
    binomial_half_width,
    block_rng,
    empirical_bep,
    run_trials,
    sample_observation,
    trials_per_block,
)

from helpers import mean_se


def test_single_ligand_bound_durations_are_exponential():
    panel = build_panel(1, k_off_base=10.0)
    obs = sample_observation([5.0], panel, 100_000, block_rng(1, 0))
    assert obs.bound_durations.mean() == pytest.approx(1 / 10.0, rel=0.01)
    assert obs.interval_counts.tolist() == [100_000]


def test_sample_observation_is_deterministic():
    panel = build_panel(3)
    a = sample_observation([1.0, 2.0, 3.0], panel, 500, block_rng(42, 7))
    b = sample_observation([1.0, 2.0, 3.0], panel, 500, block_rng(42, 7))
    np.testing.assert_array_equal(a.bound_durations, b.bound_durations)
    assert a.total_unbound_time == b.total_unbound_time
    np.testing.assert_array_equal(a.interval_counts, b.interval_counts)


def test_interval_fractions_follow_separation_matrix():
    panel = build_panel(3, gamma=3.0)
    sep = separation_matrix(panel)
    c = np.array([2.0, 5.0, 1.0])
    N = 100_000
    obs = sample_observation(c, panel, N, block_rng(3, 0))
    p = sep.S @ (c / c.sum())
    frac = obs.interval_counts / N
    assert np.all(np.abs(frac - p) < 3 * np.sqrt(p * (1 - p) / N))


def test_unbound_time_has_gamma_mean():
    panel = build_panel(2)
    c = np.array([3.0, 1.0])
    T = [sample_observation(c, panel, 1000, block_rng(9, b)).total_unbound_time for b in range(400)]
    expected = 1000 / (panel.k_on * c.sum())
    assert abs(np.mean(T) - expected) < 3 * mean_se(T)


def test_sample_observation_errors():
    panel = build_panel(2)
    with pytest.raises(DegenerateChannelError):
        sample_observation([0.0, 0.0], panel, 100, block_rng(0, 0))
    with pytest.raises(ConfigError):
        sample_observation([1.0, 1.0], panel, 2, block_rng(0, 0))


def test_trial_config_validation():
    s = SystemConfig()
    with pytest.raises(ConfigError):
        TrialConfig.from_system(s, 0)
    with pytest.raises(ConfigError):
        TrialConfig.from_system(s, 10, seed=-1)


def test_indistinguishable_symbols_give_half_error_rate():
    n = 1e5
    cfg = TrialConfig(seed=2, trials=20_000, panel=build_panel(2), channel=ChannelConfig(N0=n, N1=n), N_R=200)
    lam = received_concentrations([0, 0], cfg.channel)
    res = run_trials(cfg, thresholds=lam)
    rates, mean, _ = empirical_bep(res)
    assert abs(mean - 0.5) < binomial_half_width(0.5, res.trials * 2)


@pytest.mark.slow
def test_well_separated_single_channel_has_no_errors():
    s = SystemConfig(N_C=1, N_R=10_000, N0=1e5, N1=1e6)
    beps, _ = mean_bep(s.panel(), s.separation(), s.channel(), s.N_R)
    assert beps[0] < 1e-6
    res = run_trials(TrialConfig.from_system(s, 10_000, seed=8))
    assert res.bit_errors.sum() == 0


def test_result_shapes_and_error_indicator():
    s = SystemConfig(N_C=3, N_R=100, gamma=2.0)
    res = run_trials(TrialConfig.from_system(s, 2500, seed=4))
    assert res.bit_errors.shape == res.estimates.shape == res.true_bits.shape == (2500, 3)
    decided = (res.estimates > res.thresholds).astype(int)
    np.testing.assert_array_equal(res.bit_errors, (decided != res.true_bits).astype(int))
    assert set(np.unique(res.true_bits)) == {0, 1}


def test_trials_span_several_blocks_deterministically():
    s = SystemConfig(N_C=2, N_R=1000)
    n = 2 * trials_per_block(1000) + 17
    a = run_trials(TrialConfig.from_system(s, n, seed=99))
    b = run_trials(TrialConfig.from_system(s, n, seed=99))
    c = run_trials(TrialConfig.from_system(s, n, seed=100))
    assert a.estimates.shape[0] == n
    np.testing.assert_array_equal(a.estimates, b.estimates)
    assert not np.array_equal(a.estimates, c.estimates)


@pytest.mark.slow
def test_worker_count_does_not_change_results():
    s = SystemConfig(N_C=3, N_R=1000)
    cfg = TrialConfig.from_system(s, 3 * trials_per_block(1000) + 5, seed=12)
    serial = run_trials(cfg, workers=1)
    pooled = run_trials(cfg, workers=3)
    for name in ("bit_errors", "estimates", "true_bits", "total_estimates", "ratio_estimates"):
        np.testing.assert_array_equal(getattr(serial, name), getattr(pooled, name))


def _result(errors):
    errors = np.asarray(errors, dtype=np.int8)
    z = np.zeros(errors.shape)
    return TrialResult(errors, z, errors.copy(), z[:, 0], z)


def test_empirical_bep_all_correct():
    rates, mean, half = empirical_bep(_result(np.zeros((50, 3))))
    np.testing.assert_array_equal(rates, 0)
    assert mean == 0
    np.testing.assert_array_equal(half, 0)


def test_empirical_bep_alternating_errors():
    e = np.zeros((1000, 2))
    e[::2, 1] = 1
    rates, mean, half = empirical_bep(_result(e))
    np.testing.assert_array_equal(rates, [0.0, 0.5])
    assert half[1] == pytest.approx(3 * np.sqrt(0.25 / 1000), rel=1e-15)
    assert half[1] == pytest.approx(0.0474, abs=5e-5)
    assert mean == rates.mean()


@pytest.mark.slow
def test_default_config_matches_analytical_mean_bep(default_system):
    s = default_system
    _, analytical = mean_bep(s.panel(), s.separation(), s.channel(), s.N_R)
    res = run_trials(TrialConfig.from_system(s, 100_000, seed=2024))
    _, empirical, _ = empirical_bep(res)
    band = binomial_half_width(analytical, res.trials * s.N_C)
    assert abs(empirical - analytical) <= band, (
        f"empirical {empirical:.3e} vs analytical {analytical:.3e} (3-sigma band {band:.1e})"
    )


@pytest.mark.slow
def test_default_config_matches_gaussian_mixture(default_system):
    # per-symbol-vector Gaussians evaluated at the same thresholds
    from admux.detection import mixture_bep

    s = default_system
    res = run_trials(TrialConfig.from_system(s, 100_000, seed=2024))
    rates, _, _ = empirical_bep(res)
    predicted = mixture_bep(s.panel(), s.separation(), s.channel(), s.N_R, res.thresholds)
    assert np.all(np.abs(rates - predicted) <= binomial_half_width(predicted, res.trials) + 1e-12)
