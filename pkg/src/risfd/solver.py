"""
RIS reflection solvers.

The closed-form solvers null ``alpha * W_c p + r`` where ``W_c`` stacks the
UL self-interference rows over the DL co-channel rows. Which solver applies
depends on the number of receive rows ``N_r + M`` versus RIS elements ``K``:

* equal: unique solution by Cramer's rule (:func:`solve_determined`)
* fewer rows: minimum-norm solution (:func:`solve_underdetermined`)
* more rows: weighted least squares of the interference objective
  (:func:`solve_overdetermined`)

None of these respect ``|p_i| = 1``; their output is "relaxed".
:func:`project_unit_modulus` restores the surface constraint and
:func:`solve_coordinate_descent` searches unit-modulus phases directly,
with received-signal QoS floors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import RankDeficientError, RegimeError, SingularSystemError
from .sysmodel import (
    TWO_PI,
    RisConfig,
    ScenarioConfig,
    StackedSystem,
    constraints_satisfied,
    objective_weights,
    signal_system,
    stacked_system,
)

logger = logging.getLogger(__name__)

DET_FLOOR = 1e-12
RANK_RTOL = 1e-10

REGIMES = ("determined", "underdetermined", "overdetermined", "coordinate-descent")


@dataclass
class SolveOutcome:
    regime: str
    reflection: np.ndarray
    alpha: float
    mode: str = "relaxed"
    residual_ul: float = np.nan
    residual_dl: float = np.nan
    objective_value: float = np.nan
    qos_feasible: bool | None = None
    sweeps_used: int = 0
    objective_history: list = field(default_factory=list)

    @property
    def phases(self):
        return np.mod(np.angle(self.reflection), TWO_PI)

    @property
    def modulus_deviation(self):
        return modulus_deviation(self.reflection, self.alpha)

    @property
    def ris(self):
        return RisConfig(alpha=self.alpha, reflection=self.reflection, mode=self.mode)

    def as_dict(self):
        return {
            "regime": self.regime,
            "mode": self.mode,
            "K": self.reflection.size,
            "alpha": self.alpha,
            "phases": " ".join(f"{t:.12g}" for t in self.phases),
            "modulus_deviation": self.modulus_deviation,
            "residual_ul": self.residual_ul,
            "residual_dl": self.residual_dl,
            "objective_value": self.objective_value,
            "qos_feasible": self.qos_feasible,
            "sweeps_used": self.sweeps_used,
        }


class Projection(NamedTuple):
    ris: RisConfig
    modulus_deviation: float


def regime_for(n_rows, K):
    if n_rows == K:
        return "determined"
    if n_rows < K:
        return "underdetermined"
    return "overdetermined"


def modulus_deviation(p, alpha):
    """``max_i | |p_i| / alpha - 1 |``; zero for an empty vector."""
    p = np.asarray(p)
    if p.size == 0:
        return 0.0
    return float(np.max(np.abs(np.abs(p) / alpha - 1.0)))


def _finish(outcome: SolveOutcome, system: StackedSystem, cfg=None, ch=None):
    res = system.residual(outcome.reflection)
    ul = float(np.vdot(res[: system.n_ul], res[: system.n_ul]).real)
    dl = float(np.vdot(res[system.n_ul:], res[system.n_ul:]).real)
    if cfg is None:
        outcome.residual_ul, outcome.residual_dl = ul, dl
        outcome.objective_value = ul + dl
    else:
        outcome.residual_ul, outcome.residual_dl = cfg.p_D * ul, cfg.p_U * dl
        outcome.objective_value = outcome.residual_ul + cfg.mu * outcome.residual_dl
    if cfg is not None and ch is not None:
        outcome.qos_feasible = bool(constraints_satisfied(cfg, ch, outcome.reflection).feasible)
    return outcome


def cramer_solve(A, b, refine=1):
    """Solve the square system ``A x = b`` by Cramer's rule.

    Rows are normalized to unit norm first, which leaves ``x`` unchanged and
    makes the singularity check scale free: the system is rejected when
    ``|det(A)|`` falls below ``DET_FLOOR`` times the product of row norms.
    ``refine`` rounds of residual correction reuse the same determinants.
    """
    A = np.asarray(A, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise RegimeError(f"Cramer's rule needs a square system, got A{A.shape}, b{b.shape}")
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        raise SingularSystemError("stacked matrix has an all-zero row", 0.0)
    An = A / norms[:, np.newaxis]
    bn = b / norms
    det = np.linalg.det(An)
    if not abs(det) > DET_FLOOR:
        raise SingularSystemError(
            f"stacked matrix is singular (normalized |det| = {abs(det):.3e})", abs(det)
        )
    x = _cramer_ratios(An, bn, det)
    # determinant ratios are not backward stable; refine against the residual
    for _ in range(refine):
        x = x + _cramer_ratios(An, bn - An @ x, det)
    return x


def _cramer_ratios(An, bn, det):
    n = An.shape[0]
    # replaced[i] is An with column i swapped for bn
    replaced = np.repeat(An[np.newaxis, :, :], n, axis=0)
    idx = np.arange(n)
    replaced[idx, :, idx] = bn[np.newaxis, :]
    return np.linalg.det(replaced) / det


def solve_determined(system: StackedSystem, alpha, cfg: ScenarioConfig | None = None,
                     ch=None) -> SolveOutcome:
    """Exact nulling when ``N_r + M == K``.

    ``p_i = -det(W_c^(i)) / (alpha det(W_c))`` with column ``i`` of ``W_c``
    replaced by ``r``; the returned reflection is ``alpha * p``.
    """
    n_rows, K = system.shape
    if n_rows != K:
        raise RegimeError(f"determined regime needs N_r + M == K, got {n_rows} rows and K={K}")
    p_unit = -cramer_solve(system.W_c, system.r) / alpha
    out = SolveOutcome("determined", alpha * p_unit, alpha)
    return _finish(out, system, cfg, ch)


def min_norm_solve(A, b, refine=1):
    """Minimum-norm solution of the full-row-rank system ``A x = b``.

    Uses ``A^H = Q R`` so that ``x = Q R^{-H} b``, which stays in the row
    space of ``A``.
    """
    A = np.asarray(A, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n_rows, n_cols = A.shape
    sv = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(sv > RANK_RTOL * sv[0])) if sv.size and sv[0] > 0 else 0
    if rank < n_rows:
        raise RankDeficientError(
            f"stacked matrix has rank {rank}, needs full row rank {n_rows}", rank
        )
    Q, R = np.linalg.qr(A.conj().T)
    Rh = R.conj().T
    x = Q @ solve_triangular(Rh, b, lower=True)
    # corrections are also of the form Q y, so x stays in the row space
    for _ in range(refine):
        x = x + Q @ solve_triangular(Rh, b - A @ x, lower=True)
    return x


def solve_underdetermined(system: StackedSystem, alpha, cfg: ScenarioConfig | None = None,
                          ch=None) -> SolveOutcome:
    """Minimum-norm exact nulling when ``N_r + M < K``."""
    n_rows, K = system.shape
    if n_rows >= K:
        raise RegimeError(f"underdetermined regime needs N_r + M < K, got {n_rows} rows and K={K}")
    p_unit = min_norm_solve(alpha * system.W_c, -system.r)
    out = SolveOutcome("underdetermined", alpha * p_unit, alpha)
    return _finish(out, system, cfg, ch)


def row_weights(system: StackedSystem, cfg: ScenarioConfig):
    """Square roots of the objective weights, one per stacked row."""
    w_ul, w_dl = objective_weights(cfg)
    n_dl = system.shape[0] - system.n_ul
    return np.concatenate([np.full(system.n_ul, np.sqrt(w_ul)), np.full(n_dl, np.sqrt(w_dl))])


def solve_overdetermined(system: StackedSystem, cfg: ScenarioConfig, ch=None) -> SolveOutcome:
    """Unconstrained minimizer of the weighted interference when ``N_r + M > K``.

    UL rows carry weight ``p_D`` and DL rows ``mu * p_U``; rank deficiency
    (including ``mu = 0``) yields the minimum-norm least-squares point.
    """
    n_rows, K = system.shape
    if n_rows <= K:
        raise RegimeError(f"overdetermined regime needs N_r + M > K, got {n_rows} rows and K={K}")
    alpha = cfg.alpha
    w = row_weights(system, cfg)
    p_unit, *_ = np.linalg.lstsq(w[:, np.newaxis] * alpha * system.W_c, -w * system.r, rcond=None)
    out = SolveOutcome("overdetermined", alpha * p_unit, alpha)
    return _finish(out, system, cfg, ch)


def solve_relaxed(cfg: ScenarioConfig, ch) -> SolveOutcome:
    """Pick the closed-form solver matching the instance dimensions."""
    system = stacked_system(ch)
    regime = regime_for(*system.shape)
    if regime == "determined":
        return solve_determined(system, cfg.alpha, cfg, ch)
    if regime == "underdetermined":
        return solve_underdetermined(system, cfg.alpha, cfg, ch)
    return solve_overdetermined(system, cfg, ch)


def outcome_for(cfg: ScenarioConfig, ch, reflection, regime, mode="unit-modulus") -> SolveOutcome:
    """Wrap an externally chosen reflection with residuals and QoS status."""
    out = SolveOutcome(regime, np.asarray(reflection, dtype=np.complex128), cfg.alpha, mode=mode)
    return _finish(out, stacked_system(ch), cfg, ch)


def project_unit_modulus(p, alpha) -> Projection:
    """Keep the phase of each entry and reset its modulus to ``alpha``.

    Zero entries get phase 0.
    """
    p = np.atleast_1d(np.asarray(p, dtype=np.complex128))
    phases = np.where(p == 0, 0.0, np.angle(p))
    return Projection(RisConfig.from_phases(alpha, phases), modulus_deviation(p, alpha))


def _select(objective, shortfall):
    # candidate 0 is the current value, so exact ties keep the current phase
    feasible = shortfall == 0
    order_idx = np.arange(objective.size)
    if np.any(feasible):
        masked = np.where(feasible, objective, np.inf)
        return int(np.lexsort((order_idx, masked))[0])
    return int(np.lexsort((order_idx, objective, shortfall))[0])


def solve_coordinate_descent(cfg: ScenarioConfig, ch, grid_size=64, max_sweeps=50,
                             tolerance=1e-9, init_phases=None) -> SolveOutcome:
    """QoS-aware element-wise phase search.

    Each element in turn is set to the best of ``grid_size`` uniformly
    spaced phases with the others held fixed. Feasible candidates (signal
    powers at or above ``t_thr_U`` and ``t_thr_D``) win over infeasible ones;
    among infeasible ones the smallest total shortfall wins, then the lower
    objective. Sweeps stop when one changes nothing, when the objective
    improves by less than the fraction ``tolerance`` of its value at the
    start of the sweep without a change in feasibility, or after
    ``max_sweeps``. The tolerance is relative because interference powers
    span many orders of magnitude with distance and transmit power.
    """
    if grid_size < 2:
        raise ValueError(f"grid_size must be >= 2, got {grid_size}")
    interf = stacked_system(ch)
    signal = signal_system(ch)
    K = interf.shape[1]
    alpha = cfg.alpha

    theta = np.zeros(K) if init_phases is None else np.mod(np.asarray(init_phases, float), TWO_PI)
    if theta.shape != (K,):
        raise ValueError(f"init_phases must have length {K}")
    grid = TWO_PI * np.arange(grid_size) / grid_size
    grid_refl = alpha * np.exp(1j * grid)

    w_int = row_weights(interf, cfg) ** 2
    n_ul = interf.n_ul
    sig_w = np.concatenate([np.full(n_ul, cfg.p_U), np.full(signal.shape[0] - n_ul, cfg.p_D)])
    ul_rows = np.arange(signal.shape[0]) < n_ul

    def evaluate(res_i, res_s):
        # res_* have candidates along the last axis
        obj = w_int @ (np.abs(res_i) ** 2)
        pw = sig_w[:, np.newaxis] * np.abs(res_s) ** 2
        ul = pw[ul_rows].sum(axis=0)
        dl = pw[~ul_rows].sum(axis=0)
        shortfall = np.maximum(cfg.t_thr_U - ul, 0.0) + np.maximum(cfg.t_thr_D - dl, 0.0)
        return obj, shortfall

    p = alpha * np.exp(1j * theta)
    res_i = interf.residual(p)
    res_s = signal.residual(p)
    obj, short = evaluate(res_i[:, None], res_s[:, None])
    current_obj, current_short = float(obj[0]), float(short[0])
    history = [current_obj]

    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        start_obj, start_feasible = current_obj, current_short == 0
        changed = False
        for k in range(K):
            cand = np.concatenate([[p[k]], grid_refl])
            delta = cand - p[k]
            ci = res_i[:, None] + interf.W_c[:, k, None] * delta[None, :]
            cs = res_s[:, None] + signal.W_c[:, k, None] * delta[None, :]
            obj, short = evaluate(ci, cs)
            best = _select(obj, short)
            if best == 0:
                continue
            theta[k] = grid[best - 1]
            p[k] = cand[best]
            res_i, res_s = ci[:, best], cs[:, best]
            current_obj, current_short = float(obj[best]), float(short[best])
            history.append(current_obj)
            changed = True
        # refresh against accumulated rounding in the incremental residuals
        res_i = interf.residual(p)
        res_s = signal.residual(p)
        if not changed:
            break
        if (current_short == 0) == start_feasible and start_obj - current_obj < tolerance * start_obj:
            break
    else:
        logger.debug("coordinate descent stopped at max_sweeps=%d", max_sweeps)

    out = SolveOutcome("coordinate-descent", alpha * np.exp(1j * theta), alpha,
                       mode="unit-modulus", sweeps_used=sweeps, objective_history=history)
    return _finish(out, interf, cfg, ch)
