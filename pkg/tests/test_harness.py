import json
import math

import numpy as np
import pytest

from risfd.exceptions import ConfigError
from risfd.harness import (
    METHODS,
    RAW_COLUMNS,
    ExperimentSpec,
    ResultRow,
    Sweep,
    raw_csv,
    read_raw_csv,
    run_experiment,
    summarize,
    trial_seed,
    write_results,
)
from risfd.scenarios import FIGURE_FADING, FIGURE_GEOMETRY
from risfd.sysmodel import ScenarioConfig


def small_spec(**changes):
    kwargs = dict(
        base=ScenarioConfig(), geometry=FIGURE_GEOMETRY, fading=FIGURE_FADING,
        sweep=Sweep("P_D_max", (1e-3, 5e-3, 9e-3)), methods=METHODS, trials=3, base_seed=11,
        grid_size=8,
    )
    kwargs.update(changes)
    return ExperimentSpec(**kwargs)


def row(method="m", value=1.0, R_U=1.0, R_D=1.0, trial=0):
    return ResultRow(method, "P_D_max", value, trial, 0, R_U, R_D, R_U + R_D, 0.0, 0.0, 0.0,
                     True, "determined", "0" * 16)


def test_row_count_and_order():
    spec = small_spec()
    rows = run_experiment(spec)
    assert len(rows) == 3 * 3 * len(METHODS)
    keys = [(spec.sweep.values.index(r.sweep_value), r.trial, METHODS.index(r.method)) for r in rows]
    assert keys == sorted(keys)


def test_raw_csv_byte_identical_between_runs(tmp_path):
    spec = small_spec()
    a = write_results(run_experiment(spec), tmp_path / "a")[0].read_bytes()
    b = write_results(run_experiment(spec), tmp_path / "b")[0].read_bytes()
    assert a == b


def test_parallel_matches_serial():
    spec = small_spec(trials=2)
    assert raw_csv(run_experiment(spec, n_jobs=2)) == raw_csv(run_experiment(spec))


def test_same_fading_across_sweep_values_and_methods():
    rows = run_experiment(small_spec())
    by_trial = {}
    for r in rows:
        by_trial.setdefault(r.trial, set()).add(r.channel_checksum)
        assert r.seed == trial_seed(11, r.trial)
    assert all(len(v) == 1 for v in by_trial.values())
    assert len({next(iter(v)) for v in by_trial.values()}) == 3


def test_ul_rate_unaffected_by_downlink_power_under_nulling():
    rows = [r for r in run_experiment(small_spec(methods=("rfic-relaxed",)))]
    for t in range(3):
        rates = [r.R_U for r in rows if r.trial == t]
        assert max(rates) - min(rates) < 1e-6


def test_base_seed_changes_realizations():
    a = run_experiment(small_spec(trials=1))
    b = run_experiment(small_spec(trials=1, base_seed=12))
    assert a[0].channel_checksum != b[0].channel_checksum


def test_distance_and_k_sweeps_run():
    rows = run_experiment(small_spec(sweep=Sweep("d_bs_ris", (20.0, 60.0)), trials=1,
                                     methods=("rfic-relaxed", "rfic-unit")))
    assert {r.regime for r in rows} == {"determined"}
    rows = run_experiment(small_spec(sweep=Sweep("K", (0, 2, 4, 8)), trials=1,
                                     methods=("rfic-relaxed", "no-ris")))
    regimes = [r.regime for r in rows if r.method == "rfic-relaxed"]
    assert regimes == ["no-ris", "overdetermined", "determined", "underdetermined"]
    k0 = [r for r in rows if r.sweep_value == 0]
    assert k0[0].R_total == k0[1].R_total


def test_summarize_by_hand():
    rows = [row(R_U=v, R_D=0.0) for v in (1.0, 2.0, 3.0)]
    (s,) = summarize(rows)
    assert s["n"] == 3
    assert s["R_U_mean"] == pytest.approx(2.0)
    assert s["R_U_sd"] == pytest.approx(1.0)
    assert s["R_U_ci95"] == pytest.approx(4.302652729911275 / math.sqrt(3))


def test_summarize_single_trial_and_nan():
    (s,) = summarize([row(R_U=5.0)])
    assert (s["R_U_mean"], s["R_U_sd"], s["R_U_ci95"]) == (5.0, 0.0, 0.0)
    (s,) = summarize([row(R_U=5.0), row(R_U=float("nan"), trial=1)])
    assert s["R_U_mean"] == 5.0


def test_summary_means_within_trial_range():
    rows = run_experiment(small_spec())
    for s in summarize(rows):
        vals = [r.R_total for r in rows if r.method == s["method"] and r.sweep_value == s["sweep_value"]]
        assert min(vals) - 1e-12 <= s["R_total_mean"] <= max(vals) + 1e-12


def test_read_raw_round_trip(tmp_path):
    rows = run_experiment(small_spec())
    raw, summary = write_results(rows, tmp_path)
    back = read_raw_csv(raw)
    assert back == rows
    for r in back:
        assert r.R_total == pytest.approx(r.R_U + r.R_D, rel=1e-12)
    header = summary.read_text().splitlines()[0]
    assert header.startswith("method,sweep_parameter,sweep_value,n")
    assert raw.read_text().splitlines()[0] == ",".join(RAW_COLUMNS)


def test_json_round_trip(tmp_path):
    spec = small_spec()
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec.to_dict()))
    assert ExperimentSpec.from_json(path) == spec


@pytest.mark.parametrize("data", [
    {"bogus": 1},
    {"sweep": {"parameter": "alpha", "values": [0.5]}},
    {"sweep": {"parameter": "P_D_max", "values": []}},
    {"sweep": {"parameter": "P_D_max", "values": [-1.0]}},
    {"sweep": {"parameter": "K", "values": [1.5]}},
    {"methods": ["magic"]},
    {"trials": 0},
    {"base": {"K": 4, "colour": "red"}},
    {"base": {"alpha": 2.0}},
    {"geometry": {"d_bs_ris": -5.0}},
    {"fading": {"si_reference_distance": 0.0}},
    {"geometry": [1, 2]},
    [1, 2],
])
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        ExperimentSpec.from_dict(data)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentSpec.from_json(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        ExperimentSpec.from_json(bad)


def test_singular_solve_reported_not_raised(monkeypatch):
    from risfd import harness
    from risfd.exceptions import SingularSystemError

    def boom(*args, **kwargs):
        raise SingularSystemError("forced", 0.0)

    monkeypatch.setattr(harness.RFICSolver, "fit", boom)
    rows = run_experiment(small_spec(trials=1, methods=("rfic-relaxed", "no-ris")))
    failed = [r for r in rows if r.method == "rfic-relaxed"]
    assert all(r.regime == "singular" and np.isnan(r.R_total) for r in failed)
    assert all(np.isfinite(r.R_total) for r in rows if r.method == "no-ris")
