"""
Seeded Monte Carlo sweeps over one scenario parameter.

Trial ``t`` of an experiment always draws its fading from the same seed,
whatever the sweep value, so sweeps over powers reuse identical small-scale
fading and every method within a (value, trial) cell sees the same
:class:`~risfd.channel.ChannelSet`.

Config files are JSON objects with the keys of :class:`ExperimentSpec`;
unknown keys are rejected. Units are watts, meters, Hz and radians.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
from scipy import stats

from ._validation import check_config
from .channel import FadingModel, Geometry, generate_channel_set
from .estimators import CoordinateDescentSolver, NoRIS, NullSteering, RandomRIS, RFICSolver
from .exceptions import ConfigError, RankDeficientError, SingularSystemError
from .solver import regime_for
from .sysmodel import ScenarioConfig

logger = logging.getLogger(__name__)

METHODS = ("rfic-relaxed", "rfic-unit", "rfic-qos", "no-ris", "random-ris", "null-steering")
SWEEP_PARAMETERS = ("P_D_max", "P_U_max", "d_bs_ris", "N", "K")

RAW_COLUMNS = (
    "method", "sweep_parameter", "sweep_value", "trial", "seed",
    "R_U", "R_D", "R_total", "ul_interference", "dl_interference",
    "modulus_deviation", "qos_feasible", "regime", "channel_checksum",
)
SUMMARY_COLUMNS = (
    "method", "sweep_parameter", "sweep_value", "n",
    "R_U_mean", "R_U_sd", "R_U_ci95",
    "R_D_mean", "R_D_sd", "R_D_ci95",
    "R_total_mean", "R_total_sd", "R_total_ci95",
)


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(
                f"unknown sweep parameter {self.parameter!r}; expected one of {SWEEP_PARAMETERS}"
            )
        values = tuple(self.values)
        if not values:
            raise ConfigError("sweep needs at least one value")
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"sweep value {v!r} is not a number")
            if self.parameter in ("N", "K"):
                if int(v) != v or v < 0:
                    raise ConfigError(f"{self.parameter} sweep values must be integers >= 0")
            elif not v > 0:
                raise ConfigError(f"{self.parameter} sweep values must be positive, got {v!r}")
        if self.parameter in ("N", "K"):
            values = tuple(int(v) for v in values)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class ExperimentSpec:
    base: ScenarioConfig = field(default_factory=ScenarioConfig)
    geometry: Geometry = field(default_factory=Geometry)
    fading: FadingModel = field(default_factory=FadingModel)
    sweep: Sweep = field(default_factory=lambda: Sweep("P_D_max", (1e-3,)))
    methods: tuple = ("rfic-relaxed", "no-ris")
    trials: int = 1
    base_seed: int = 0
    grid_size: int = 64
    max_sweeps: int = 50
    tolerance: float = 1e-9

    def __post_init__(self):
        methods = tuple(self.methods)
        bad = [m for m in methods if m not in METHODS]
        if bad or not methods:
            raise ConfigError(f"unknown methods {bad}; expected a non-empty subset of {METHODS}")
        object.__setattr__(self, "methods", methods)
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError(f"trials must be an integer >= 1, got {self.trials!r}")
        if int(self.base_seed) != self.base_seed or self.base_seed < 0:
            raise ConfigError(f"base_seed must be a non-negative integer, got {self.base_seed!r}")
        if int(self.grid_size) != self.grid_size or self.grid_size < 2:
            raise ConfigError(f"grid_size must be an integer >= 2, got {self.grid_size!r}")
        if int(self.max_sweeps) != self.max_sweeps or self.max_sweeps < 1:
            raise ConfigError(f"max_sweeps must be an integer >= 1, got {self.max_sweeps!r}")
        if not self.tolerance >= 0:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance!r}")
        # surface any invalid sweep point now rather than mid-run
        for value in self.sweep.values:
            self.point(value)

    def point(self, value):
        """Scenario and geometry at one sweep value."""
        name = self.sweep.parameter
        if name == "d_bs_ris":
            return self.base, _replace(self.geometry, d_bs_ris=float(value))
        return self.base.replace(**{name: value}), self.geometry

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("experiment config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown experiment fields: {sorted(unknown)}")
        kwargs = dict(data)
        try:
            if "base" in kwargs:
                kwargs["base"] = check_config(kwargs["base"])
            if "geometry" in kwargs:
                kwargs["geometry"] = _build(Geometry, kwargs["geometry"], "geometry")
            if "fading" in kwargs:
                kwargs["fading"] = _build(FadingModel, kwargs["fading"], "fading")
            if "sweep" in kwargs:
                kwargs["sweep"] = _build(Sweep, kwargs["sweep"], "sweep")
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path):
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(data)

    def to_dict(self):
        out = asdict(self)
        out["methods"] = list(self.methods)
        out["sweep"]["values"] = list(self.sweep.values)
        return out


def _build(kind, data, label):
    if not isinstance(data, dict):
        raise ConfigError(f"{label} must be a JSON object")
    known = {f.name for f in fields(kind)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown {label} fields: {sorted(unknown)}")
    return kind(**data)


def _replace(obj, **changes):
    values = {f.name: getattr(obj, f.name) for f in fields(obj)}
    values.update(changes)
    return type(obj)(**values)


@dataclass(frozen=True)
class ResultRow:
    method: str
    sweep_parameter: str
    sweep_value: float
    trial: int
    seed: int
    R_U: float
    R_D: float
    R_total: float
    ul_interference: float
    dl_interference: float
    modulus_deviation: float
    qos_feasible: bool
    regime: str
    channel_checksum: str

    def as_csv_row(self):
        out = []
        for name in RAW_COLUMNS:
            value = getattr(self, name)
            if isinstance(value, bool):
                out.append("true" if value else "false")
            elif isinstance(value, float):
                out.append(repr(value))
            else:
                out.append(str(value))
        return out


def trial_seed(base_seed, trial):
    """64-bit seed for one trial, independent of the sweep value."""
    ss = np.random.SeedSequence([int(base_seed), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _make_estimator(method, cfg, spec: ExperimentSpec, seed):
    if method == "rfic-relaxed":
        return RFICSolver(cfg, mode="relaxed")
    if method == "rfic-unit":
        return RFICSolver(cfg, mode="unit-modulus")
    if method == "rfic-qos":
        return CoordinateDescentSolver(cfg, grid_size=spec.grid_size,
                                       max_sweeps=spec.max_sweeps, tolerance=spec.tolerance)
    if method == "no-ris":
        return NoRIS(cfg)
    # random-ris and null-steering draw the same surface from the same stream
    rng = np.random.default_rng([seed, 1])
    if method == "random-ris":
        return RandomRIS(cfg, random_state=rng)
    return NullSteering(cfg, random_state=rng)


def _method_regime(method, cfg):
    if cfg.K == 0:
        return "no-ris" if method.startswith("rfic") else method
    if method in ("rfic-relaxed", "rfic-unit"):
        return regime_for(cfg.N_r + cfg.M, cfg.K)
    if method == "rfic-qos":
        return "coordinate-descent"
    return method


def evaluate_trial(spec: ExperimentSpec, value, trial):
    """All requested methods on the realization of one (value, trial) cell."""
    cfg, geometry = spec.point(value)
    seed = trial_seed(spec.base_seed, trial)
    ch = generate_channel_set(cfg, geometry, np.random.default_rng(seed), spec.fading)
    checksum = ch.checksum()
    rows = []
    for method in spec.methods:
        est = _make_estimator(method, cfg, spec, seed)
        regime = _method_regime(method, cfg)
        try:
            est.fit(ch)
            rates = est.predict(ch)
        except (SingularSystemError, RankDeficientError) as exc:
            logger.warning("%s failed at %s=%r trial %d: %s",
                           method, spec.sweep.parameter, value, trial, exc)
            nan = float("nan")
            rows.append(ResultRow(method, spec.sweep.parameter, float(value), trial, seed,
                                  nan, nan, nan, nan, nan, nan, False, "singular", checksum))
            continue
        refl = est.reflection_
        dev = 0.0 if refl is None else float(np.max(np.abs(np.abs(refl) / cfg.alpha - 1.0)))
        qos = (rates.ul_signal_power >= cfg.t_thr_U) and (rates.dl_signal_power >= cfg.t_thr_D)
        rows.append(ResultRow(
            method=method,
            sweep_parameter=spec.sweep.parameter,
            sweep_value=float(value),
            trial=trial,
            seed=seed,
            R_U=rates.R_U,
            R_D=rates.R_D,
            R_total=rates.R_U + rates.R_D,
            ul_interference=rates.ul_interference_power,
            dl_interference=rates.dl_interference_power,
            modulus_deviation=dev,
            qos_feasible=bool(qos),
            regime=regime,
            channel_checksum=checksum,
        ))
    return rows


def run_experiment(spec: ExperimentSpec, n_jobs=1):
    """Evaluate every (sweep value, trial) cell; rows sorted by value, trial, method.

    With ``n_jobs != 1`` cells are spread over worker processes via joblib;
    the output does not depend on scheduling.
    """
    cells = [(i, v, t) for i, v in enumerate(spec.sweep.values) for t in range(spec.trials)]
    if n_jobs == 1:
        results = [evaluate_trial(spec, v, t) for _, v, t in cells]
    else:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=n_jobs)(delayed(evaluate_trial)(spec, v, t) for _, v, t in cells)
    order = {m: k for k, m in enumerate(spec.methods)}
    keyed = []
    for (i, _, t), rows in zip(cells, results):
        keyed.extend(((i, t, order[r.method]), r) for r in rows)
    keyed.sort(key=lambda kr: kr[0])
    return [r for _, r in keyed]


def _stats(values):
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    n = values.size
    if n == 0:
        return 0, np.nan, np.nan, np.nan
    mean = float(np.mean(values))
    if n == 1:
        return 1, mean, 0.0, 0.0
    sd = float(np.std(values, ddof=1))
    half = float(stats.t.ppf(0.975, n - 1) * sd / np.sqrt(n))
    return n, mean, sd, half


def summarize(rows):
    """Mean, sample sd and 95% t-interval half-width per (method, sweep value).

    Rows with non-finite rates (failed solves) are left out of the statistics.
    """
    groups = {}
    for r in rows:
        groups.setdefault((r.method, r.sweep_parameter, r.sweep_value), []).append(r)
    out = []
    for (method, param, value), members in groups.items():
        entry = {"method": method, "sweep_parameter": param, "sweep_value": value}
        for metric in ("R_U", "R_D", "R_total"):
            n, mean, sd, half = _stats([getattr(m, metric) for m in members])
            entry.update({f"{metric}_mean": mean, f"{metric}_sd": sd, f"{metric}_ci95": half})
        entry["n"] = n
        out.append(entry)
    return out


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def raw_csv(rows):
    return _csv_text(RAW_COLUMNS, [r.as_csv_row() for r in rows])


def summary_csv(summary):
    def fmt(v):
        return repr(v) if isinstance(v, float) else str(v)
    return _csv_text(SUMMARY_COLUMNS, [[fmt(s[c]) for c in SUMMARY_COLUMNS] for s in summary])


def write_results(rows, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "raw.csv").write_text(raw_csv(rows))
    (out_dir / "summary.csv").write_text(summary_csv(summarize(rows)))
    return out_dir / "raw.csv", out_dir / "summary.csv"


def read_raw_csv(path):
    """Parse a ``raw.csv`` back into :class:`ResultRow` objects."""
    types = {f.name: f.type for f in fields(ResultRow)}
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            kwargs = {}
            for name, text in rec.items():
                kind = types[name]
                if kind == "float":
                    kwargs[name] = float(text)
                elif kind == "int":
                    kwargs[name] = int(text)
                elif kind == "bool":
                    kwargs[name] = text == "true"
                else:
                    kwargs[name] = text
            rows.append(ResultRow(**kwargs))
    return rows
