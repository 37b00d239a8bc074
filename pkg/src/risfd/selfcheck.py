"""Fast invariant checks run by ``risfd check``."""

from __future__ import annotations

import numpy as np

from .baselines import baseline_null_steering, random_ris_config
from .channel import generate_channel_set, pathloss_db
from .scenarios import FIGURE_FADING, FIGURE_GEOMETRY
from .solver import solve_coordinate_descent, solve_determined, solve_underdetermined
from .sysmodel import (
    ScenarioConfig,
    effective_channels,
    gradient_objective,
    objective,
    rate_breakdown,
    stacked_system,
)


def _channels(cfg, seed):
    return generate_channel_set(cfg, FIGURE_GEOMETRY, np.random.default_rng(seed), FIGURE_FADING)


def check_pathloss():
    d = np.linspace(0.5, 500, 1000)
    return bool(np.all(np.diff(pathloss_db(d)) > 0)), "pathloss strictly increasing"


def check_determinism():
    cfg = ScenarioConfig()
    return _channels(cfg, 7) == _channels(cfg, 7), "same seed gives identical channels"


def check_interference_identity(n=20):
    cfg = ScenarioConfig()
    worst = 0.0
    rng = np.random.default_rng(1)
    for seed in range(n):
        ch = _channels(cfg, seed)
        p = cfg.alpha * np.exp(1j * rng.uniform(0, 2 * np.pi, cfg.K))
        dense = rate_breakdown(cfg, ch, p).ul_interference_power
        reduced = cfg.p_D * np.linalg.norm(stacked_system(ch).residual(p)[: cfg.N_r]) ** 2
        worst = max(worst, abs(dense - reduced) / dense)
    return worst < 1e-12, f"reduced vs dense UL interference, worst rel err {worst:.1e}"


def check_exact_nulling(n=20):
    cfg = ScenarioConfig(K=4)
    worst = 0.0
    for seed in range(n):
        ch = _channels(cfg, seed)
        out = solve_determined(stacked_system(ch), cfg.alpha, cfg)
        base = rate_breakdown(cfg, ch, None)
        worst = max(worst, out.residual_ul / base.ul_interference_power,
                    out.residual_dl / base.dl_interference_power)
    return worst <= 1e-18, f"determined nulling, worst residual ratio {worst:.1e}"


def check_min_norm(n=20):
    cfg = ScenarioConfig(N_r=1, M=1, K=4)
    worst = 0.0
    for seed in range(n):
        ch = _channels(cfg, seed)
        out = solve_underdetermined(stacked_system(ch), cfg.alpha, cfg)
        base = rate_breakdown(cfg, ch, None)
        worst = max(worst, out.residual_ul / base.ul_interference_power,
                    out.residual_dl / base.dl_interference_power)
    return worst <= 1e-18, f"min-norm nulling, worst residual ratio {worst:.1e}"


def check_gradient(n=20, step=1e-4):
    cfg = ScenarioConfig(K=4)
    rng = np.random.default_rng(2)
    worst = 0.0
    for seed in range(n):
        ch = _channels(cfg, seed)
        theta = rng.uniform(0, 2 * np.pi, cfg.K)
        g = gradient_objective(cfg, ch, theta)
        for i in range(cfg.K):
            e = np.zeros(cfg.K)
            e[i] = step
            fd = (objective(cfg, ch, cfg.alpha * np.exp(1j * (theta + e)))
                  - objective(cfg, ch, cfg.alpha * np.exp(1j * (theta - e)))) / (2 * step)
            worst = max(worst, abs(fd - g[i]) / max(abs(g[i]), 1e-3 * np.max(np.abs(g))))
    return worst < 1e-5, f"gradient vs central differences, worst rel err {worst:.1e}"


def check_projector(n=20):
    cfg = ScenarioConfig(N_t=1, N_r=2)
    worst = 0.0
    for seed in range(n):
        ch = _channels(cfg, seed)
        ris = random_ris_config(cfg.K, cfg.alpha, np.random.default_rng(seed))
        _, P = baseline_null_steering(cfg, ch, ris, return_projector=True)
        H = effective_channels(ch, ris).ul_interference
        worst = max(worst, np.abs(P @ P - P).max(), np.abs(P - P.conj().T).max(),
                    np.abs(P @ H).max() / np.abs(H).max())
    return worst < 1e-12, f"null-steering projector properties, worst {worst:.1e}"


def check_coordinate_descent(n=10):
    cfg = ScenarioConfig(K=4)
    ok = True
    for seed in range(n):
        hist = solve_coordinate_descent(cfg, _channels(cfg, seed)).objective_history
        ok &= bool(np.all(np.diff(hist) <= 0))
    return ok, "coordinate descent objective non-increasing"


CHECKS = (
    check_pathloss,
    check_determinism,
    check_interference_identity,
    check_exact_nulling,
    check_min_norm,
    check_gradient,
    check_projector,
    check_coordinate_descent,
)


def run_checks():
    """Run every check; returns a list of ``(name, passed, detail)``."""
    results = []
    for check in CHECKS:
        passed, detail = check()
        results.append((check.__name__.removeprefix("check_"), bool(passed), detail))
    return results
