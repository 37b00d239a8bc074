"""Command line entry point: ``risfd {solve,run,check}``."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .channel import generate_channel_set
from .exceptions import ConfigError
from .harness import METHODS, ExperimentSpec, _replace, run_experiment, write_results
from .selfcheck import run_checks
from .solver import (
    outcome_for,
    project_unit_modulus,
    solve_coordinate_descent,
    solve_relaxed,
)
from .sysmodel import rate_breakdown

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2
SOLVE_METHODS = ("rfic-relaxed", "rfic-unit", "rfic-qos")


def _parse_methods(text):
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise ConfigError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
    return methods


def _load_spec(args):
    spec = ExperimentSpec() if args.config is None else ExperimentSpec.from_json(args.config)
    changes = {}
    if args.seed is not None:
        changes["base_seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.method is not None:
        changes["methods"] = _parse_methods(args.method)
    return _replace(spec, **changes) if changes else spec


def cmd_solve(args):
    spec = _load_spec(args)
    method = spec.methods[0] if args.method else "rfic-relaxed"
    if method not in SOLVE_METHODS:
        raise ConfigError(f"solve supports {', '.join(SOLVE_METHODS)}, got {method!r}")
    cfg, geometry = spec.point(spec.sweep.values[0])
    if cfg.K == 0:
        raise ConfigError("solve needs K >= 1")
    ch = generate_channel_set(cfg, geometry, np.random.default_rng(spec.base_seed), spec.fading)
    if method == "rfic-qos":
        outcome = solve_coordinate_descent(cfg, ch, spec.grid_size, spec.max_sweeps, spec.tolerance)
    else:
        outcome = solve_relaxed(cfg, ch)
        if method == "rfic-unit":
            ris = project_unit_modulus(outcome.reflection, cfg.alpha).ris
            outcome = outcome_for(cfg, ch, ris.reflection, outcome.regime)
    baseline = rate_breakdown(cfg, ch, None)
    rates = rate_breakdown(cfg, ch, outcome.reflection)
    lines = dict(outcome.as_dict())
    lines.update({
        "seed": spec.base_seed,
        "baseline_ul": baseline.ul_interference_power,
        "baseline_dl": baseline.dl_interference_power,
        "R_U": rates.R_U,
        "R_D": rates.R_D,
    })
    for key, value in lines.items():
        print(f"{key}={value}")
    return EXIT_OK


def cmd_run(args):
    if args.config is None:
        raise ConfigError("run requires --config")
    spec = _load_spec(args)
    rows = run_experiment(spec, n_jobs=args.jobs)
    raw, summary = write_results(rows, args.out)
    failed = sum(r.regime == "singular" for r in rows)
    print(f"wrote {len(rows)} rows to {raw} and {summary}" + (f" ({failed} failed solves)" if failed else ""))
    return EXIT_OK


def cmd_check(args):
    results = run_checks()
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(p for _, p, _ in results) else EXIT_NUMERIC


def build_parser():
    parser = argparse.ArgumentParser(prog="risfd", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="experiment JSON file")
        p.add_argument("--seed", type=int, help="override base_seed")
        p.add_argument("--trials", type=int, help="override trials")
        p.add_argument("--method", help="comma-separated methods")

    p_solve = sub.add_parser("solve", help="solve one seeded instance")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_run = sub.add_parser("run", help="run an experiment sweep")
    common(p_run)
    p_run.add_argument("--out", default="results", help="output directory")
    p_run.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_run.set_defaults(func=cmd_run)

    p_check = sub.add_parser("check", help="run invariant self-tests")
    p_check.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
