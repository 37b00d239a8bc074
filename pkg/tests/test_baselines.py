import numpy as np
import pytest

from conftest import channels_for
from risfd.baselines import (
    baseline_no_ris,
    baseline_null_steering,
    baseline_random_ris,
    interference_projector,
    random_ris_config,
)
from risfd.channel import ChannelSet
from risfd.sysmodel import ScenarioConfig, effective_channels, rate_breakdown


def test_no_ris_equals_zero_reflection(cfg):
    ch = channels_for(cfg, 0)
    assert baseline_no_ris(cfg, ch) == rate_breakdown(cfg, ch, np.zeros(cfg.K))


def test_no_ris_zero_interference_channels(cfg):
    ch = channels_for(cfg, 1)
    z = np.zeros_like(ch.S)
    quiet = ChannelSet(**{**ch.as_dict(), "S": z, "V": np.zeros_like(ch.V)})
    rates = baseline_no_ris(cfg, quiet)
    assert rates.ul_interference_power == 0.0
    assert rates.dl_interference_power == 0.0


def test_no_ris_ul_interference_is_row_sum_power(cfg):
    ch = channels_for(cfg, 2)
    expected = cfg.p_D * np.linalg.norm(ch.S @ np.ones(cfg.N_t)) ** 2
    assert baseline_no_ris(cfg, ch).ul_interference_power == pytest.approx(expected, rel=1e-14)


def test_random_ris_deterministic_and_unit_modulus(cfg):
    a = random_ris_config(cfg.K, cfg.alpha, np.random.default_rng(5))
    b = random_ris_config(cfg.K, cfg.alpha, np.random.default_rng(5))
    np.testing.assert_array_equal(a.reflection, b.reflection)
    np.testing.assert_allclose(np.abs(a.reflection), cfg.alpha, rtol=1e-14)
    ch = channels_for(cfg, 0)
    assert (baseline_random_ris(cfg, ch, np.random.default_rng(5))
            == baseline_random_ris(cfg, ch, np.random.default_rng(5)))


def test_random_ris_phase_distribution():
    phases = random_ris_config(20_000, 1.0, np.random.default_rng(0)).phases
    assert phases.min() >= 0 and phases.max() < 2 * np.pi
    assert abs(phases.mean() - np.pi) < 0.05


def test_random_ris_zero_efficiency_is_no_ris(cfg):
    ch = channels_for(cfg, 3)
    rates = baseline_random_ris(cfg, ch, np.random.default_rng(0), alpha=0.0)
    assert rates == baseline_no_ris(cfg, ch)


def test_projector_by_hand():
    P = interference_projector(np.array([[1.0], [0.0]], complex))
    np.testing.assert_allclose(P, [[0, 0], [0, 1]], atol=1e-15)


def test_projector_rank_one_interference():
    cfg = ScenarioConfig(N_t=1, N_r=2)
    for seed in range(10):
        ch = channels_for(cfg, seed)
        ris = random_ris_config(cfg.K, cfg.alpha, np.random.default_rng(seed))
        rates, P = baseline_null_steering(cfg, ch, ris, return_projector=True)
        H = effective_channels(ch, ris).ul_interference
        assert np.linalg.matrix_rank(P) == 1
        assert np.trace(P).real == pytest.approx(1.0)
        np.testing.assert_allclose(P @ P, P, atol=1e-12)
        np.testing.assert_allclose(P, P.conj().T, atol=1e-12)
        assert np.abs(P @ H).max() <= 1e-12 * np.abs(H).max()
        assert rates.ul_interference_power <= 1e-20 * rate_breakdown(cfg, ch, ris).ul_interference_power
        assert rates.ul_noise_power == pytest.approx(cfg.noise_per_antenna)


def test_projector_full_rank_interference_kills_uplink(cfg):
    ch = channels_for(cfg, 0)
    rates, P = baseline_null_steering(cfg, ch, return_projector=True)
    np.testing.assert_allclose(P, 0, atol=1e-12)
    assert rates.R_U == 0.0


def test_null_steering_keeps_downlink(cfg):
    ch = channels_for(cfg, 4)
    ris = random_ris_config(cfg.K, cfg.alpha, np.random.default_rng(1))
    ns = baseline_null_steering(cfg, ch, ris)
    rnd = rate_breakdown(cfg, ch, ris)
    assert ns.R_D == rnd.R_D


def test_projector_of_empty_matrix():
    np.testing.assert_array_equal(interference_projector(np.zeros((3, 0), complex)), np.eye(3))
