"""Input validation helpers shared by the estimators and the harness."""

from __future__ import annotations

from dataclasses import fields

import numpy as np

from .channel import CHANNEL_NAMES, ChannelSet
from .exceptions import ConfigError
from .sysmodel import ScenarioConfig, check_channel_dims


def check_config(config) -> ScenarioConfig:
    """Accept a :class:`ScenarioConfig`, a mapping of its fields, or ``None``."""
    if config is None:
        return ScenarioConfig()
    if isinstance(config, ScenarioConfig):
        return config
    if isinstance(config, dict):
        known = {f.name for f in fields(ScenarioConfig)}
        unknown = set(config) - known
        if unknown:
            raise ConfigError(f"unknown scenario fields: {sorted(unknown)}")
        return ScenarioConfig(**config)
    raise ConfigError(f"expected ScenarioConfig or dict, got {type(config).__name__}")


def check_channels(channels, config: ScenarioConfig | None = None) -> ChannelSet:
    """Coerce to :class:`ChannelSet` and verify shapes and finiteness."""
    if isinstance(channels, dict):
        missing = set(CHANNEL_NAMES) - set(channels)
        if missing:
            raise ValueError(f"channel mapping is missing {sorted(missing)}")
        channels = ChannelSet(**{n: np.asarray(channels[n], dtype=np.complex128)
                                 for n in CHANNEL_NAMES})
    if not isinstance(channels, ChannelSet):
        raise TypeError(f"expected ChannelSet, got {type(channels).__name__}")
    check_channel_dims(channels, config)
    for name in CHANNEL_NAMES:
        if not np.all(np.isfinite(getattr(channels, name))):
            raise ValueError(f"channel {name} contains non-finite entries")
    return channels


def check_reflection(p, K) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, dtype=np.complex128))
    if p.shape != (K,):
        raise ValueError(f"reflection vector must have length {K}, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("reflection vector contains non-finite entries")
    return p


def check_rng(random_state) -> np.random.Generator:
    """Turn ``None``, an int, a seed sequence or a Generator into a Generator."""
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)
