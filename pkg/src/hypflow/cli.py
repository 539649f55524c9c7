"""Command-line entry point.

Subcommands:
  constants  print the constant bundle and barrier radii for (b, eps, delta, alpha_tol)
  run        execute every scenario in a config file, writing JSON records
  sweep      run the configured control-time sweep, writing records and a CSV

Exit codes: 0 success, 2 configuration or domain error, 3 at least one run
flagged blow-up, 4 I/O failure, 5 sweep inconclusive (all runs censored).
The default output directory comes from --out, then HYPFLOW_OUT, then
./hypflow-out.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .barriers import compute_barrier_params
from .config import ConfigError, load_config_file
from .errors import (
    DegenerateSweepDesignError,
    DomainError,
    GenerationError,
    SweepInconclusiveError,
)
from .experiments import GridPolicy, control_time_sweep, fit_exponential, run_scenario
from .records import append_manifest, config_digest, write_record, write_sweep_csv
from .schedule import build_constants

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FLAGGED = 3
EXIT_IO = 4
EXIT_INCONCLUSIVE = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypflow",
        description="Conformal Ricci flow laboratory on the Poincare disc",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_const = sub.add_parser("constants", help="print the constant bundle")
    p_const.add_argument("--b", type=float, default=0.1)
    p_const.add_argument("--eps", type=float, default=0.05)
    p_const.add_argument("--delta", type=float, default=0.025)
    p_const.add_argument("--alpha-tol", type=float, default=0.5)

    for name in ("run", "sweep"):
        p = sub.add_parser(name, help=f"{name} scenarios from a config file")
        p.add_argument("--config", required=(name == "run"), help="config file path")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--jobs", type=int, default=None, help="parallel runs")
        p.add_argument("--seed", type=int, default=None, help="override scenario seeds")
        if name == "sweep":
            p.add_argument(
                "--synthetic-fit",
                default=None,
                metavar="CSV",
                help="test-only: fit R,control_time rows from CSV and echo the slope",
            )
    return parser


def _out_dir(arg) -> Path:
    out = Path(arg or os.environ.get("HYPFLOW_OUT") or "hypflow-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_constants(args) -> int:
    try:
        bundle = build_constants(args.eps, args.b, args.delta, args.alpha_tol)
        params = compute_barrier_params(args.b, args.eps)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    values = {
        "J": params.J,
        "j": params.j,
        "alpha_disc": params.alpha_disc,
        "mu": params.mu,
        "Lambda": bundle.Lambda,
        "c": bundle.c,
        "R_min": bundle.R_min,
    }
    for key, val in values.items():
        print(f"{key} = {val:.12g}")
    print(json.dumps({k: float(v) for k, v in values.items()}))
    return EXIT_OK


def _load(args):
    config, raw = load_config_file(args.config)
    if args.seed is not None:
        config = dataclasses.replace(
            config,
            scenarios=tuple(
                dataclasses.replace(s, seed=args.seed) for s in config.scenarios
            ),
        )
    return config, config_digest(raw)


def _cmd_run(args) -> int:
    try:
        config, digest = _load(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not config.scenarios:
        print("error: config declares no scenarios", file=sys.stderr)
        return EXIT_CONFIG
    policy = GridPolicy(dr_target=config.grid.dr)
    try:
        out = _out_dir(args.out)
        paths = []
        flagged = False
        for scenario in config.scenarios:
            record = run_scenario(scenario, policy.make_grid(scenario.R))
            path = write_record(out / f"{scenario.name}.json", record)
            paths.append(path)
            if record.solver_meta.get("failed_at") is not None:
                flagged = True
                print(
                    f"warning: run '{scenario.name}' blew up at "
                    f"t = {record.solver_meta['failed_at']:.6g}",
                    file=sys.stderr,
                )
        append_manifest(out, digest, paths)
    except (DomainError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: write failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_FLAGGED if flagged else EXIT_OK


def _cmd_sweep(args) -> int:
    if args.synthetic_fit is not None:
        return _synthetic_fit(args.synthetic_fit)
    if not args.config:
        print("error: sweep requires --config", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config, digest = _load(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if config.sweep is None:
        print("error: config has no [sweep] section", file=sys.stderr)
        return EXIT_CONFIG
    template = next(
        s for s in config.scenarios if s.name == config.sweep.template
    )
    if config.sweep.horizon is not None:
        template = dataclasses.replace(template, horizon=config.sweep.horizon)
    jobs = args.jobs if args.jobs is not None else config.sweep.jobs
    policy = GridPolicy(dr_target=config.grid.dr)
    try:
        result = control_time_sweep(
            config.sweep.radii, template, policy, jobs=jobs
        )
    except SweepInconclusiveError as exc:
        print(f"error: sweep inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (DomainError, GenerationError, DegenerateSweepDesignError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        out = _out_dir(args.out)
        paths = []
        for record in result.records:
            paths.append(write_record(out / f"{record.scenario.name}.json", record))
        csv_path = write_sweep_csv(out / f"{template.name}-sweep.csv", result)
        append_manifest(out, digest, paths + [csv_path])
    except OSError as exc:
        print(f"error: write failure: {exc}", file=sys.stderr)
        return EXIT_IO
    print(
        f"slope = {result.slope:.6g}  intercept = {result.intercept:.6g}  "
        f"r_squared = {result.r_squared:.6g}"
    )
    flagged = any(r.solver_meta.get("failed_at") is not None for r in result.records)
    return EXIT_FLAGGED if flagged else EXIT_OK


def _synthetic_fit(path: str) -> int:
    """Fit caller-supplied (R, control_time) rows; used to self-test the fitter."""
    try:
        rows = [
            line.split(",")
            for line in Path(path).read_text().strip().splitlines()
            if line and not line.startswith("#") and not line.lower().startswith("r,")
        ]
        radii = [float(row[0]) for row in rows]
        times = [float(row[1]) for row in rows]
    except (OSError, ValueError, IndexError) as exc:
        print(f"error: cannot read synthetic data: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    slope, intercept, r_squared = fit_exponential(radii, times)
    print(f"slope = {slope:.12g}")
    print(f"intercept = {intercept:.12g}")
    print(f"r_squared = {r_squared:.12g}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "constants":
        return _cmd_constants(args)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_sweep(args)


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
