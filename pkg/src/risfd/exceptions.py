"""Exception types raised by the solvers and the experiment harness."""

import numpy as np


class ConfigError(ValueError):
    """Invalid scenario, geometry or experiment configuration."""


class RegimeError(ValueError):
    """The stacked system dimensions do not match the requested solver regime."""


class SingularSystemError(np.linalg.LinAlgError):
    """Determinant of the stacked reflection matrix is numerically zero."""

    def __init__(self, message, det_magnitude):
        super().__init__(message)
        self.det_magnitude = det_magnitude


class RankDeficientError(np.linalg.LinAlgError):
    """The stacked reflection matrix lacks full row rank."""

    def __init__(self, message, rank):
        super().__init__(message)
        self.rank = rank
