"""Comparison schemes against which the nulling solvers are measured."""

from __future__ import annotations

import numpy as np

from .sysmodel import (
    TWO_PI,
    RateBreakdown,
    RisConfig,
    ScenarioConfig,
    effective_channels,
    rate_breakdown,
)

BASELINE_KINDS = ("no-ris", "random-ris", "null-steering")


def baseline_no_ris(cfg: ScenarioConfig, ch) -> RateBreakdown:
    return rate_breakdown(cfg, ch, None)


def random_ris_config(K, alpha, rng) -> RisConfig:
    """Independent phases uniform on ``[0, 2*pi)`` with modulus ``alpha``."""
    return RisConfig.from_phases(alpha, rng.uniform(0.0, TWO_PI, size=K))


def baseline_random_ris(cfg: ScenarioConfig, ch, rng, alpha=None) -> RateBreakdown:
    alpha = cfg.alpha if alpha is None else alpha
    return rate_breakdown(cfg, ch, random_ris_config(ch.n_ris, alpha, rng))


def interference_projector(H, rtol=1e-10):
    """Orthogonal projector onto the complement of the column space of ``H``.

    Rank is decided from the SVD with singular values below ``rtol`` times
    the largest treated as zero.
    """
    n = H.shape[0]
    if H.size == 0:
        return np.eye(n, dtype=np.complex128)
    Uh, sv, _ = np.linalg.svd(H, full_matrices=True)
    rank = int(np.sum(sv > rtol * sv[0])) if sv[0] > 0 else 0
    null = Uh[:, rank:]
    return null @ null.conj().T


def baseline_null_steering(cfg: ScenarioConfig, ch, ris: RisConfig | None = None,
                           return_projector=False):
    """Random-surface rates with a BS receive projector that removes SI.

    Only the UL side changes; DL UEs have a single antenna each. The UL
    noise is the expected projected noise power ``N0 B trace(P)``.
    """
    eff = effective_channels(ch, ris)
    P = interference_projector(eff.ul_interference)
    y_sig = P @ eff.ul_signal.sum(axis=1)
    y_int = P @ eff.ul_interference.sum(axis=1)
    base = rate_breakdown(cfg, ch, ris)
    out = RateBreakdown(
        ul_signal_power=float(cfg.p_U * np.vdot(y_sig, y_sig).real),
        ul_interference_power=float(cfg.p_D * np.vdot(y_int, y_int).real),
        ul_noise_power=float(cfg.noise_per_antenna * np.trace(P).real),
        dl_signal_power=base.dl_signal_power,
        dl_interference_power=base.dl_interference_power,
        dl_noise_power=base.dl_noise_power,
    )
    return (out, P) if return_projector else out
