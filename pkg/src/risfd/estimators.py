"""
Estimator-style wrappers around the solvers and baselines.

Every scheme follows the same protocol: ``fit(channels)`` chooses a RIS
reflection for one :class:`~risfd.channel.ChannelSet`, ``predict(channels)``
returns the :class:`~risfd.sysmodel.RateBreakdown` that reflection achieves,
``transform(channels)`` returns the effective channels and ``score`` the
total sum rate. Hyperparameters live in ``__init__`` so ``get_params`` /
``set_params`` / ``clone`` work as usual.

    est = RFICSolver(config=cfg).fit(ch)
    est.predict(ch).R_U
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_channels, check_config, check_rng
from .baselines import baseline_null_steering, random_ris_config
from .solver import SolveOutcome, project_unit_modulus, solve_coordinate_descent, solve_relaxed
from .sysmodel import RateBreakdown, effective_channels, rate_breakdown


class RISSchemeBase(BaseEstimator):
    """Shared predict/transform/score; subclasses set ``ris_`` in ``fit``."""

    def _validate(self, channels):
        cfg = check_config(self.config)
        return cfg, check_channels(channels, cfg)

    def predict(self, channels) -> RateBreakdown:
        check_is_fitted(self, "ris_")
        cfg, ch = self._validate(channels)
        return rate_breakdown(cfg, ch, self.ris_)

    def transform(self, channels):
        check_is_fitted(self, "ris_")
        _, ch = self._validate(channels)
        return effective_channels(ch, self.ris_)

    def fit_predict(self, channels, y=None) -> RateBreakdown:
        return self.fit(channels, y).predict(channels)

    def score(self, channels, y=None):
        return self.predict(channels).R_total

    @property
    def reflection_(self):
        check_is_fitted(self, "ris_")
        return None if self.ris_ is None else self.ris_.reflection


class RFICSolver(RISSchemeBase):
    """Closed-form interference nulling.

    Parameters
    ----------
    config : ScenarioConfig or dict, optional
    mode : {"relaxed", "unit-modulus"}
        ``"relaxed"`` keeps the closed-form reflection as is; ``"unit-modulus"``
        keeps only its phases.
    """

    def __init__(self, config=None, mode="relaxed"):
        self.config = config
        self.mode = mode

    def fit(self, channels, y=None):
        if self.mode not in ("relaxed", "unit-modulus"):
            raise ValueError(f"mode must be 'relaxed' or 'unit-modulus', got {self.mode!r}")
        cfg, ch = self._validate(channels)
        if cfg.K == 0:
            self.outcome_ = None
            self.ris_ = None
            return self
        outcome = solve_relaxed(cfg, ch)
        if self.mode == "relaxed":
            self.ris_ = outcome.ris
        else:
            self.ris_ = project_unit_modulus(outcome.reflection, cfg.alpha).ris
        self.outcome_ = outcome
        return self


class CoordinateDescentSolver(RISSchemeBase):
    """Quantized element-wise phase search honoring the QoS floors in ``config``."""

    def __init__(self, config=None, grid_size=64, max_sweeps=50, tolerance=1e-9,
                 init_phases=None):
        self.config = config
        self.grid_size = grid_size
        self.max_sweeps = max_sweeps
        self.tolerance = tolerance
        self.init_phases = init_phases

    def fit(self, channels, y=None):
        cfg, ch = self._validate(channels)
        if cfg.K == 0:
            self.outcome_ = None
            self.ris_ = None
            return self
        outcome: SolveOutcome = solve_coordinate_descent(
            cfg, ch, grid_size=self.grid_size, max_sweeps=self.max_sweeps,
            tolerance=self.tolerance, init_phases=self.init_phases,
        )
        self.outcome_ = outcome
        self.ris_ = outcome.ris
        return self


class NoRIS(RISSchemeBase):
    def __init__(self, config=None):
        self.config = config

    def fit(self, channels, y=None):
        self._validate(channels)
        self.ris_ = None
        return self


class RandomRIS(RISSchemeBase):
    """Independent uniform phases with modulus ``alpha``."""

    def __init__(self, config=None, random_state=None):
        self.config = config
        self.random_state = random_state

    def fit(self, channels, y=None):
        cfg, ch = self._validate(channels)
        rng = check_rng(self.random_state)
        self.ris_ = random_ris_config(cfg.K, cfg.alpha, rng) if cfg.K else None
        return self


class NullSteering(RandomRIS):
    """Random surface plus a BS receive projector that nulls the SI subspace."""

    def fit(self, channels, y=None):
        super().fit(channels, y)
        cfg, ch = self._validate(channels)
        _, self.projector_ = baseline_null_steering(cfg, ch, self.ris_, return_projector=True)
        return self

    def predict(self, channels) -> RateBreakdown:
        check_is_fitted(self, "ris_")
        cfg, ch = self._validate(channels)
        return baseline_null_steering(cfg, ch, self.ris_)

    def transform(self, channels):
        """Effective channels with the UL pair seen through the projector."""
        eff = super().transform(channels)
        P = baseline_null_steering(*self._validate(channels), self.ris_, return_projector=True)[1]
        return eff._replace(ul_signal=P @ eff.ul_signal, ul_interference=P @ eff.ul_interference)

