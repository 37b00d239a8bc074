"""
Signal model of the RIS-assisted full-duplex MIMO link.

Transmit symbols are all-ones vectors throughout, so every received power
reduces to the squared norm of a channel's row sums. Under that convention
the UL self-interference at the BS is ``s + U_c p`` and the DL co-channel
interference at the DL UEs is ``v + D_c p``, both affine in the RIS
reflection vector ``p`` (entries ``alpha * exp(j theta_i)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import NamedTuple

import numpy as np

from .channel import ChannelSet
from .exceptions import ConfigError

TWO_PI = 2.0 * np.pi


def dbm_to_watts(dbm):
    return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)


# -174 dBm/Hz
DEFAULT_N0 = float(dbm_to_watts(-174.0))


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical and dimensional parameters of one RIS-FD instance.

    Powers are in watts, ``N0`` in W/Hz and ``B`` in Hz. Per-antenna powers
    ``p_U`` and ``p_D`` are derived from the totals.
    """

    N_t: int = 2
    N_r: int = 2
    N: int = 2
    M: int = 2
    K: int = 4
    P_U_max: float = 1e-3
    P_D_max: float = 1e-3
    alpha: float = 0.95
    N0: float = DEFAULT_N0
    B: float = 20e6
    mu: float = 1.0
    t_thr_U: float = 0.0
    t_thr_D: float = 0.0
    gamma_thr_U: float = 0.0
    gamma_thr_D: float = 0.0

    def __post_init__(self):
        for name in ("N_t", "N_r", "N", "M"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {value!r}")
        if int(self.K) != self.K or self.K < 0:
            raise ConfigError(f"K must be an integer >= 0, got {self.K!r}")
        for name in ("P_U_max", "P_D_max", "N0", "B"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if not self.mu >= 0:
            raise ConfigError(f"mu must be >= 0, got {self.mu!r}")
        for name in ("t_thr_U", "t_thr_D"):
            if not getattr(self, name) >= 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    @property
    def p_U(self):
        return self.P_U_max / self.N

    @property
    def p_D(self):
        return self.P_D_max / self.N_t

    @property
    def noise_per_antenna(self):
        return self.N0 * self.B

    def replace(self, **changes):
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return type(self)(**values)


@dataclass(frozen=True, eq=False)
class RisConfig:
    """Reflection state of the surface.

    In ``"unit-modulus"`` mode each entry is ``alpha * exp(j theta_i)``; in
    ``"relaxed"`` mode entries are arbitrary complex numbers.
    """

    alpha: float
    reflection: np.ndarray
    mode: str = "unit-modulus"

    def __post_init__(self):
        if self.mode not in ("unit-modulus", "relaxed"):
            raise ValueError(f"unknown RIS mode {self.mode!r}")
        refl = np.atleast_1d(np.asarray(self.reflection, dtype=np.complex128))
        if refl.ndim != 1:
            raise ValueError("reflection must be a vector")
        object.__setattr__(self, "reflection", refl)
        if self.mode == "unit-modulus" and refl.size:
            if np.max(np.abs(np.abs(refl) - self.alpha)) > 1e-12:
                raise ValueError("unit-modulus reflection entries must all have modulus alpha")

    @classmethod
    def from_phases(cls, alpha, phases):
        phases = np.atleast_1d(np.asarray(phases, dtype=float))
        return cls(alpha=alpha, reflection=alpha * np.exp(1j * phases), mode="unit-modulus")

    @property
    def K(self):
        return self.reflection.size

    @property
    def phases(self):
        """Arguments of the reflection entries wrapped to ``[0, 2*pi)``."""
        return np.mod(np.angle(self.reflection), TWO_PI)


@dataclass(frozen=True)
class Reductions:
    """Row sums of the channel matrices (all-ones symbol convention)."""

    d1: np.ndarray
    u1: np.ndarray
    s: np.ndarray
    v: np.ndarray
    u: np.ndarray
    d: np.ndarray


@dataclass(frozen=True)
class StackedSystem:
    """Interference residual ``W_c p + r``, UL rows first then DL rows."""

    W_c: np.ndarray
    r: np.ndarray
    n_ul: int

    @property
    def U_c(self):
        return self.W_c[: self.n_ul]

    @property
    def D_c(self):
        return self.W_c[self.n_ul:]

    @property
    def s(self):
        return self.r[: self.n_ul]

    @property
    def v(self):
        return self.r[self.n_ul:]

    @property
    def shape(self):
        return self.W_c.shape

    def residual(self, p):
        return self.W_c @ p + self.r


@dataclass(frozen=True)
class RateBreakdown:
    ul_signal_power: float
    ul_interference_power: float
    ul_noise_power: float
    dl_signal_power: float
    dl_interference_power: float
    dl_noise_power: float
    R_U: float = field(init=False)
    R_D: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "R_U", _log_rate(
            self.ul_signal_power, self.ul_interference_power + self.ul_noise_power))
        object.__setattr__(self, "R_D", _log_rate(
            self.dl_signal_power, self.dl_interference_power + self.dl_noise_power))

    @property
    def R_total(self):
        return self.R_U + self.R_D

    @property
    def ul_sinr(self):
        return _sinr(self.ul_signal_power, self.ul_interference_power + self.ul_noise_power)

    @property
    def dl_sinr(self):
        return _sinr(self.dl_signal_power, self.dl_interference_power + self.dl_noise_power)


def _sinr(signal, denom):
    if signal == 0:
        return 0.0
    return signal / denom


def _log_rate(signal, denom):
    return float(np.log2(1.0 + _sinr(signal, denom)))


class EffectiveChannels(NamedTuple):
    dl_signal: np.ndarray
    dl_interference: np.ndarray
    ul_signal: np.ndarray
    ul_interference: np.ndarray


class QosStatus(NamedTuple):
    ul_ok: bool
    dl_ok: bool
    ul_signal_power: float
    dl_signal_power: float

    @property
    def feasible(self):
        return self.ul_ok and self.dl_ok


def assemble_ris_matrix(ris: RisConfig):
    """Diagonal ``K x K`` reflection matrix."""
    return np.diag(ris.reflection)


def _as_theta_matrix(theta, K):
    if isinstance(theta, RisConfig):
        theta = theta.reflection
    if theta is None:
        return np.zeros((K, K), dtype=np.complex128)
    theta = np.asarray(theta, dtype=np.complex128)
    if theta.ndim == 1:
        theta = np.diag(theta)
    if theta.shape != (K, K):
        raise ValueError(f"RIS matrix must be {K}x{K}, got {theta.shape}")
    return theta


def check_channel_dims(ch: ChannelSet, cfg: ScenarioConfig | None = None):
    """Raise ``ValueError`` when the eight matrices are mutually inconsistent."""
    n_rx, n_ul, n_dl, n_tx, K = ch.n_rx, ch.n_ul, ch.n_dl, ch.n_tx, ch.n_ris
    expected = {
        "U": (n_rx, n_ul), "U1": (K, n_ul), "U2": (n_rx, K),
        "D": (n_dl, n_tx), "D1": (K, n_tx), "D2": (n_dl, K),
        "S": (n_rx, n_tx), "V": (n_dl, n_ul),
    }
    for name, shape in expected.items():
        got = getattr(ch, name).shape
        if got != shape:
            raise ValueError(f"channel {name} has shape {got}, expected {shape}")
    if cfg is not None:
        dims = (cfg.N_r, cfg.N, cfg.M, cfg.N_t, cfg.K)
        if dims != (n_rx, n_ul, n_dl, n_tx, K):
            raise ValueError(
                f"channel set dims (N_r, N, M, N_t, K)={(n_rx, n_ul, n_dl, n_tx, K)} "
                f"do not match config {dims}"
            )


def effective_channels(ch: ChannelSet, theta=None) -> EffectiveChannels:
    """Direct plus cascaded RIS channels for a reflection state ``theta``.

    ``theta`` may be a ``K x K`` matrix, a length-``K`` reflection vector,
    a :class:`RisConfig`, or ``None`` for a switched-off surface.
    """
    check_channel_dims(ch)
    T = _as_theta_matrix(theta, ch.n_ris)
    return EffectiveChannels(
        dl_signal=ch.D + ch.D2 @ T @ ch.D1,
        dl_interference=ch.V + ch.D2 @ T @ ch.U1,
        ul_signal=ch.U + ch.U2 @ T @ ch.U1,
        ul_interference=ch.S + ch.U2 @ T @ ch.D1,
    )


def reductions(ch: ChannelSet) -> Reductions:
    return Reductions(
        d1=ch.D1.sum(axis=1),
        u1=ch.U1.sum(axis=1),
        s=ch.S.sum(axis=1),
        v=ch.V.sum(axis=1),
        u=ch.U.sum(axis=1),
        d=ch.D.sum(axis=1),
    )


def stacked_system(ch: ChannelSet) -> StackedSystem:
    """Stack ``U_c = U2 diag(d1)`` over ``D_c = D2 diag(u1)`` with ``r = (s, v)``."""
    check_channel_dims(ch)
    if ch.n_ris == 0:
        raise ValueError("stacked system requires at least one RIS element")
    red = reductions(ch)
    W_c = np.vstack([ch.U2 * red.d1[np.newaxis, :], ch.D2 * red.u1[np.newaxis, :]])
    r = np.concatenate([red.s, red.v])
    return StackedSystem(W_c=W_c, r=r, n_ul=ch.n_rx)


def signal_system(ch: ChannelSet) -> StackedSystem:
    """Desired-signal analogue of :func:`stacked_system`.

    UL rows ``u + U2 diag(u1) p``, DL rows ``d + D2 diag(d1) p``.
    """
    red = reductions(ch)
    W = np.vstack([ch.U2 * red.u1[np.newaxis, :], ch.D2 * red.d1[np.newaxis, :]])
    return StackedSystem(W_c=W, r=np.concatenate([red.u, red.d]), n_ul=ch.n_rx)


def _reflection_of(ris, K):
    if ris is None:
        return np.zeros(K, dtype=np.complex128)
    if isinstance(ris, RisConfig):
        return ris.reflection
    return np.atleast_1d(np.asarray(ris, dtype=np.complex128))


def _power(H, scale):
    # all-ones symbols: ||sqrt(scale) H 1||^2
    if H.size == 0:
        return 0.0
    y = H.sum(axis=1)
    return float(scale * np.vdot(y, y).real)


def rate_breakdown(cfg: ScenarioConfig, ch: ChannelSet, ris=None) -> RateBreakdown:
    """UL/DL powers and sum rates for a reflection state (``None`` = surface off)."""
    eff = effective_channels(ch, _reflection_of(ris, ch.n_ris))
    noise = cfg.noise_per_antenna
    return RateBreakdown(
        ul_signal_power=_power(eff.ul_signal, cfg.p_U),
        ul_interference_power=_power(eff.ul_interference, cfg.p_D),
        ul_noise_power=noise * ch.n_rx,
        dl_signal_power=_power(eff.dl_signal, cfg.p_D),
        dl_interference_power=_power(eff.dl_interference, cfg.p_U),
        dl_noise_power=noise * ch.n_dl,
    )


def objective_weights(cfg: ScenarioConfig):
    """Row weights ``(p_D, mu * p_U)`` of the UL and DL interference terms."""
    return cfg.p_D, cfg.mu * cfg.p_U


def objective_terms(cfg: ScenarioConfig, ch: ChannelSet, p, system=None):
    """UL and DL interference powers ``p_D ||s + U_c p||^2`` and ``p_U ||v + D_c p||^2``."""
    system = stacked_system(ch) if system is None else system
    res = system.residual(np.asarray(p, dtype=np.complex128))
    ul = res[: system.n_ul]
    dl = res[system.n_ul:]
    return cfg.p_D * float(np.vdot(ul, ul).real), cfg.p_U * float(np.vdot(dl, dl).real)


def objective(cfg: ScenarioConfig, ch: ChannelSet, p, system=None):
    """Weighted interference ``p_D ||s + U_c p||^2 + mu p_U ||v + D_c p||^2`` in watts.

    ``p`` is the full reflection vector (``alpha`` already applied).
    """
    ul, dl = objective_terms(cfg, ch, p, system)
    return ul + cfg.mu * dl


def constraints_satisfied(cfg: ScenarioConfig, ch: ChannelSet, p) -> QosStatus:
    """Check the received-signal power floors ``t_thr_U`` and ``t_thr_D`` (inclusive)."""
    eff = effective_channels(ch, _reflection_of(p, ch.n_ris))
    ul = _power(eff.ul_signal, cfg.p_U)
    dl = _power(eff.dl_signal, cfg.p_D)
    return QosStatus(ul >= cfg.t_thr_U, dl >= cfg.t_thr_D, ul, dl)


def gradient_objective(cfg: ScenarioConfig, ch: ChannelSet, theta, alpha=None, system=None):
    """Analytic derivative of :func:`objective` with respect to the phases.

    With ``p_i = alpha exp(j theta_i)``, the derivative of ``w ||c + W p||^2``
    along ``theta_i`` is ``2 w Re(conj(res) . W[:, i] * j p_i)`` summed over
    rows.
    """
    alpha = cfg.alpha if alpha is None else alpha
    system = stacked_system(ch) if system is None else system
    theta = np.asarray(theta, dtype=float)
    p = alpha * np.exp(1j * theta)
    res = system.residual(p)
    w_ul, w_dl = objective_weights(cfg)
    weights = np.concatenate([
        np.full(system.n_ul, w_ul), np.full(res.size - system.n_ul, w_dl)
    ])
    # d res / d theta_i = W[:, i] * j p_i
    return 2.0 * np.real((weights * res.conj()) @ system.W_c * (1j * p))
