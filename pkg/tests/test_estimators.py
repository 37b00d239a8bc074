import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import channels_for
from risfd import (
    CoordinateDescentSolver,
    NoRIS,
    NullSteering,
    RandomRIS,
    RFICSolver,
)
from risfd.baselines import baseline_null_steering
from risfd.exceptions import ConfigError
from risfd.solver import project_unit_modulus, solve_coordinate_descent, solve_relaxed
from risfd.sysmodel import ScenarioConfig, rate_breakdown

ALL = [RFICSolver, CoordinateDescentSolver, NoRIS, RandomRIS, NullSteering]


@pytest.mark.parametrize("cls", ALL)
def test_params_and_clone(cls):
    est = cls(config=ScenarioConfig(K=3))
    params = est.get_params()
    assert params["config"] == ScenarioConfig(K=3)
    twin = clone(est)
    assert twin.get_params().keys() == params.keys()
    assert not hasattr(twin, "ris_")


@pytest.mark.parametrize("cls", ALL)
def test_not_fitted(cls, cfg):
    with pytest.raises(NotFittedError):
        cls(config=cfg).predict(channels_for(cfg, 0))


@pytest.mark.parametrize("cls", ALL)
def test_score_is_total_rate(cls, cfg):
    ch = channels_for(cfg, 0)
    kwargs = {"random_state": 0} if cls in (RandomRIS, NullSteering) else {}
    est = cls(config=cfg, **kwargs).fit(ch)
    rates = est.predict(ch)
    assert est.score(ch) == rates.R_total == rates.R_U + rates.R_D


def test_rfic_matches_functional(cfg):
    ch = channels_for(cfg, 1)
    est = RFICSolver(config=cfg).fit(ch)
    outcome = solve_relaxed(cfg, ch)
    np.testing.assert_array_equal(est.reflection_, outcome.reflection)
    assert est.predict(ch) == rate_breakdown(cfg, ch, outcome.reflection)


def test_rfic_unit_modulus_mode(cfg):
    ch = channels_for(cfg, 1)
    est = RFICSolver(config=cfg, mode="unit-modulus").fit(ch)
    expected = project_unit_modulus(solve_relaxed(cfg, ch).reflection, cfg.alpha).ris.reflection
    np.testing.assert_array_equal(est.reflection_, expected)


def test_rfic_bad_mode(cfg):
    with pytest.raises(ValueError):
        RFICSolver(config=cfg, mode="exact").fit(channels_for(cfg, 0))


def test_coordinate_descent_matches_functional(cfg):
    ch = channels_for(cfg, 2)
    est = CoordinateDescentSolver(config=cfg, grid_size=16).fit(ch)
    np.testing.assert_array_equal(est.reflection_,
                                  solve_coordinate_descent(cfg, ch, grid_size=16).reflection)


def test_random_ris_reproducible(cfg):
    ch = channels_for(cfg, 0)
    a = RandomRIS(config=cfg, random_state=7).fit(ch).reflection_
    b = RandomRIS(config=cfg, random_state=7).fit(ch).reflection_
    np.testing.assert_array_equal(a, b)


def test_null_steering_predict_and_transform():
    cfg = ScenarioConfig(N_t=1, N_r=2)
    ch = channels_for(cfg, 3)
    est = NullSteering(config=cfg, random_state=2).fit(ch)
    assert est.predict(ch) == baseline_null_steering(cfg, ch, est.ris_)
    eff = est.transform(ch)
    assert np.abs(eff.ul_interference).max() < 1e-12 * np.abs(ch.S).max()


def test_no_ris_transform_is_direct(cfg):
    ch = channels_for(cfg, 0)
    eff = NoRIS(config=cfg).fit(ch).transform(ch)
    np.testing.assert_array_equal(eff.ul_interference, ch.S)
    assert NoRIS(config=cfg).fit(ch).reflection_ is None


def test_without_ris_elements():
    cfg = ScenarioConfig(K=0)
    ch = channels_for(cfg, 0)
    for cls in (RFICSolver, CoordinateDescentSolver, RandomRIS):
        est = cls(config=cfg).fit(ch)
        assert est.ris_ is None
        assert est.predict(ch) == NoRIS(config=cfg).fit(ch).predict(ch)


def test_dict_config_and_dict_channels(cfg):
    ch = channels_for(cfg, 0)
    est = RFICSolver(config={"K": 4}).fit(ch.as_dict())
    assert est.score(ch) == RFICSolver(config=cfg).fit(ch).score(ch)


def test_validation_errors(cfg):
    ch = channels_for(cfg, 0)
    with pytest.raises(ConfigError):
        RFICSolver(config={"K": 4, "bogus": 1}).fit(ch)
    with pytest.raises(ValueError):
        RFICSolver(config=ScenarioConfig(K=5)).fit(ch)
    bad = ch.as_dict()
    bad["S"] = np.full_like(bad["S"], np.nan)
    with pytest.raises(ValueError):
        RFICSolver(config=cfg).fit(bad)
    with pytest.raises(TypeError):
        RFICSolver(config=cfg).fit([1, 2, 3])
