"""
Distance-attenuated Rayleigh channels for the RIS-assisted full-duplex link.

All UEs sit in a single cluster on the BS-RIS axis. The BS is at 0 m, the
UE cluster at ``d_ue_mark`` and the RIS at ``d_bs_ris``; reflected legs
between RIS and UEs use ``|d_bs_ris - d_ue_mark|`` clamped to ``d_min``.
Direct links use their configured distances verbatim.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields
from typing import TYPE_CHECKING

import numpy as np

from .exceptions import ConfigError

if TYPE_CHECKING:
    from .sysmodel import ScenarioConfig

#: Channel names in canonical order (used for checksums and iteration).
CHANNEL_NAMES = ("U", "U1", "U2", "D", "D1", "D2", "S", "V")

LOS_INTERCEPT_DB = 38.88
LOS_SLOPE_DB = 22.0


@dataclass(frozen=True)
class Geometry:
    """Link distances in meters."""

    d_bs_ris: float = 60.0
    d_bs_ulue: float = 70.0
    d_bs_dlue: float = 60.0
    d_ue_ue: float = 60.0
    d_ue_mark: float = 60.0
    d_min: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f"Geometry.{f.name} must be a positive distance, got {value!r}")
        if self.d_min < 1:
            raise ConfigError(f"Geometry.d_min must be >= 1 m, got {self.d_min!r}")


@dataclass(frozen=True)
class FadingModel:
    # the SI channel S has no physical distance; this one stands in for it
    si_reference_distance: float = 1.0

    def __post_init__(self):
        if not self.si_reference_distance >= 0.1:
            raise ConfigError(
                f"si_reference_distance must be >= 0.1 m, got {self.si_reference_distance!r}"
            )


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """The eight channel matrices of one realization.

    Shapes: ``U`` N_r x N, ``U1`` K x N, ``U2`` N_r x K, ``D`` M x N_t,
    ``D1`` K x N_t, ``D2`` M x K, ``S`` N_r x N_t, ``V`` M x N.
    """

    U: np.ndarray
    U1: np.ndarray
    U2: np.ndarray
    D: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def n_rx(self):
        return self.U.shape[0]

    @property
    def n_ul(self):
        return self.U.shape[1]

    @property
    def n_dl(self):
        return self.D.shape[0]

    @property
    def n_tx(self):
        return self.D.shape[1]

    @property
    def n_ris(self):
        return self.U1.shape[0]

    def as_dict(self):
        return {name: getattr(self, name) for name in CHANNEL_NAMES}

    def checksum(self):
        """Short hex digest identifying this realization bit for bit."""
        h = hashlib.sha256()
        for name in CHANNEL_NAMES:
            mat = np.ascontiguousarray(getattr(self, name), dtype=np.complex128)
            h.update(name.encode())
            h.update(np.asarray(mat.shape, dtype=np.int64).tobytes())
            h.update(mat.tobytes())
        return h.hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, ChannelSet):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in CHANNEL_NAMES
        )


def pathloss_db(d0):
    """Line-of-sight pathloss at 3.5 GHz, ``38.88 + 22 log10(d0)`` dB.

    Accepts scalars or arrays; every distance must be strictly positive.
    """
    d0 = np.asarray(d0, dtype=float)
    if np.any(~(d0 > 0)):
        raise ValueError("pathloss distance must be strictly positive")
    out = LOS_INTERCEPT_DB + LOS_SLOPE_DB * np.log10(d0)
    return float(out) if out.ndim == 0 else out


def pathloss_gain(d0):
    """Linear power gain ``10^(-PL/10)``."""
    return 10.0 ** (-np.asarray(pathloss_db(d0)) / 10.0)


def link_distances(geometry: Geometry, fading: FadingModel | None = None):
    """Distance in meters used for each of the eight channels."""
    fading = FadingModel() if fading is None else fading
    g = geometry
    ris_to_ue = max(abs(g.d_bs_ris - g.d_ue_mark), g.d_min)
    return {
        "U": g.d_bs_ulue,
        "D": g.d_bs_dlue,
        "V": g.d_ue_ue,
        "D1": g.d_bs_ris,
        "U2": g.d_bs_ris,
        "U1": ris_to_ue,
        "D2": ris_to_ue,
        "S": fading.si_reference_distance,
    }


def sample_channel(rows, cols, distance, rng):
    """Draw a ``rows x cols`` Rayleigh-faded matrix at ``distance`` meters.

    Entries are CN(0, 1) scaled by the square root of the linear pathloss
    gain, so ``|h|^2`` is exponential with mean ``10^(-PL/10)``. Zero-sized
    shapes are allowed and consume no randomness.
    """
    if rows < 0 or cols < 0:
        raise ValueError(f"matrix shape must be non-negative, got ({rows}, {cols})")
    amplitude = np.sqrt(pathloss_gain(distance))
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.complex128)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return amplitude * (re + 1j * im) / np.sqrt(2.0)


def generate_channel_set(cfg: ScenarioConfig, geometry: Geometry, rng,
                         fading: FadingModel | None = None) -> ChannelSet:
    """Sample all eight matrices of one realization in canonical order."""
    dist = link_distances(geometry, fading)
    shapes = {
        "U": (cfg.N_r, cfg.N),
        "U1": (cfg.K, cfg.N),
        "U2": (cfg.N_r, cfg.K),
        "D": (cfg.M, cfg.N_t),
        "D1": (cfg.K, cfg.N_t),
        "D2": (cfg.M, cfg.K),
        "S": (cfg.N_r, cfg.N_t),
        "V": (cfg.M, cfg.N),
    }
    mats = {
        name: sample_channel(*shapes[name], dist[name], rng) for name in CHANNEL_NAMES
    }
    return ChannelSet(**mats)
