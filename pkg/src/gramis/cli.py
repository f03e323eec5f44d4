"""Command line for running experiments, sweeps, and derivative checks."""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

from .harness import (
    BUILTINS,
    CHECK_TARGETS,
    builtin_cells,
    check_gradients,
    config_to_dict,
    load_config,
    run_experiment,
    sweep,
    verify_results,
)

QUICK_RUNS = 20


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit 1 (2 is reserved for failed
    threshold verification)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_cells(spec: str):
    """A config argument is either a JSON file path or a builtin name."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        config = load_config(path)
        return config.name, [(config.name, config)]
    return spec, builtin_cells(spec)


def _apply_overrides(config, args):
    runs_before = config.runs
    if getattr(args, "quick", False):
        config = dataclasses.replace(config, runs=min(config.runs, QUICK_RUNS))
    if getattr(args, "seed", None) is not None:
        config = dataclasses.replace(config, base_seed=args.seed)
    return config, runs_before


def _cmd_run(args) -> int:
    name, cells = _resolve_cells(args.config)
    out_root = Path(args.out) if args.out else None
    summaries = {}
    run_scale = 1.0
    for label, config in cells:
        config, runs_before = _apply_overrides(config, args)
        run_scale = max(run_scale, math.sqrt(runs_before / config.runs))
        if out_root is not None and len(cells) > 1:
            cell_dir = out_root / label
        else:
            cell_dir = out_root
        result = run_experiment(
            config, out_dir=cell_dir, trace=args.trace, n_jobs=args.threads
        )
        summary = result.summary_dict()
        summaries[label] = summary
        table = summary["rmse"]
        line = f"{label}: rmse_z={table['z']} rmse_mean={table['mean']}"
        if summary["chi2_mean"] is not None:
            line += f" chi2={summary['chi2_mean']}"
        if summary["failures"]:
            line += f" failures={summary['failures']}"
        print(line)
    if out_root is not None and len(cells) > 1:
        out_root.mkdir(parents=True, exist_ok=True)
        aggregate = {"name": name, "cells": summaries}
        (out_root / "summary.json").write_text(json.dumps(aggregate, indent=2) + "\n")
    if args.verify:
        failures = verify_results(name, summaries, run_scale=run_scale)
        for failure in failures:
            print(f"VERIFY FAIL {failure}", file=sys.stderr)
        if failures:
            return 2
        print("verify: all thresholds met")
    return 0


def _cmd_sweep(args) -> int:
    name, cells = _resolve_cells(args.config)
    if len(cells) != 1:
        raise SystemExit(f"sweep needs a single-cell config, got {len(cells)} cells")
    config, _ = _apply_overrides(cells[0][1], args)
    values = [int(v) for v in args.values.split(",")]
    summary = sweep(config, args.axis, values, out_dir=args.out, n_jobs=args.threads)
    for row in summary["rows"]:
        print(
            f"{args.axis}={row['value']}: mse_mean={row['mse_mean']} "
            f"rmse_z={row['rmse']['z']} failures={row['failures']}"
        )
    return 0


def _cmd_check_gradients(args) -> int:
    if args.target in CHECK_TARGETS:
        spec = CHECK_TARGETS[args.target]()
    else:
        spec = json.loads(Path(args.target).read_text())
        if "target" in spec:
            spec = spec["target"]
    report = check_gradients(spec, n_points=args.points, seed=args.seed or 0)
    print(
        f"grad max rel err {report['max_grad_rel_err']:.3e} "
        f"(threshold {report['grad_threshold']:g}); "
        f"hessian max rel err {report['max_hessian_rel_err']:.3e} "
        f"(threshold {report['hessian_threshold']:g})"
    )
    if not report["passed"]:
        print("check-gradients: FAIL", file=sys.stderr)
        return 2
    print("check-gradients: pass")
    return 0


def _cmd_list_builtins(args) -> int:
    for name in sorted(BUILTINS):
        cells = builtin_cells(name)
        labels = ", ".join(label for label, _ in cells)
        print(f"{name} ({len(cells)} cell{'s' if len(cells) != 1 else ''}): {labels}")
    print("gradient-check targets: " + ", ".join(sorted(CHECK_TARGETS)))
    return 0


def _cmd_show_config(args) -> int:
    _, cells = _resolve_cells(args.config)
    payload = {label: config_to_dict(cfg) for label, cfg in cells}
    if len(cells) == 1:
        payload = payload[cells[0][0]]
    print(json.dumps(payload, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gramis", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config or builtin")
    run.add_argument("--config", required=True,
                     help="JSON config file, or a builtin name (see list-builtins)")
    run.add_argument("--quick", action="store_true",
                     help=f"cap replications at {QUICK_RUNS} and widen verify thresholds")
    run.add_argument("--trace", action="store_true",
                     help="also write proposal traces and a density grid")
    run.add_argument("--out", help="output directory for CSV/JSON artifacts")
    run.add_argument("--seed", type=int, help="override the config's base seed")
    run.add_argument("--threads", type=int, default=1, help="worker processes")
    run.add_argument("--verify", action="store_true",
                     help="check builtin thresholds; exit 2 on failure")
    run.set_defaults(func=_cmd_run)

    sw = sub.add_parser("sweep", help="repeat a config along one axis")
    sw.add_argument("--config", required=True)
    sw.add_argument("--axis", required=True, choices=["dimension", "iterations"])
    sw.add_argument("--values", required=True, help="comma-separated integers")
    sw.add_argument("--quick", action="store_true")
    sw.add_argument("--out")
    sw.add_argument("--seed", type=int)
    sw.add_argument("--threads", type=int, default=1)
    sw.set_defaults(func=_cmd_sweep)

    chk = sub.add_parser("check-gradients", help="finite-difference derivative check")
    chk.add_argument("--target", required=True,
                     help="named target or JSON file with a target spec")
    chk.add_argument("--points", type=int, default=100)
    chk.add_argument("--seed", type=int, default=0)
    chk.set_defaults(func=_cmd_check_gradients)

    ls = sub.add_parser("list-builtins", help="list builtin experiment names")
    ls.set_defaults(func=_cmd_list_builtins)

    show = sub.add_parser("show-config", help="print a config or builtin as JSON")
    show.add_argument("--config", required=True)
    show.set_defaults(func=_cmd_show_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - single reporting point for the CLI
        print(f"gramis: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
