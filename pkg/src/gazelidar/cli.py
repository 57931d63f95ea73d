"""Command line interface: validate configs, run sweeps, report results."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__
from .runner import (ConfigError, load_run_config, quartiles, run_sweep, summarize,
                     validate_run_config, write_density_samples_csv, write_results_csv,
                     write_summary_json)


def cmd_validate(config_path: str) -> int:
    try:
        config = load_run_config(config_path)
    except ConfigError as exc:
        print(f"invalid: {exc}")
        return 1
    problems = validate_run_config(config)
    if problems:
        for p in problems:
            print(f"invalid: {config_path}: {p}")
        return 1
    print(f"ok: {config_path}")
    return 0


def cmd_run(config_path: str, out_dir: str, jobs: int = 1,
            seed_override: int | None = None) -> int:
    try:
        config = load_run_config(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    problems = validate_run_config(config)
    if problems:
        for p in problems:
            print(f"error: {config_path}: {p}", file=sys.stderr)
        return 2
    if seed_override is not None:
        config = dataclasses.replace(config, seeds=(seed_override,))
    records = run_sweep(config, jobs=jobs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(records, out / "results.csv")
    write_density_samples_csv(records, out / "density_samples.csv")
    write_summary_json(summarize(records), out / "summary.json")
    failures = sum(1 for r in records if r.failed)
    detected = sum(1 for r in records if r.detection is not None)
    print(f"{len(records)} runs, {detected} detections, {failures} failures -> {out}")
    return 1 if failures else 0


def _read_results(out_dir: Path):
    """Parse results.csv and density_samples.csv back into per-cell lists."""
    ttas: dict[tuple[str, float], list[float]] = {}
    densities: dict[tuple[str, float], list[float]] = {}
    counts: dict[tuple[str, float], int] = {}
    results_path = out_dir / "results.csv"
    with open(results_path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rownum, row in enumerate(reader, start=2):
            try:
                key = (row["variant"], float(row["fog"]))
                counts[key] = counts.get(key, 0) + 1
                if row["detected"] == "true":
                    ttas.setdefault(key, []).append(float(row["tta_s"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"{results_path}: row {rownum}: {exc}") from exc
    samples_path = out_dir / "density_samples.csv"
    with open(samples_path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rownum, row in enumerate(reader, start=2):
            try:
                key = (row["variant"], float(row["fog"]))
                densities.setdefault(key, []).append(float(row["density_pts_per_deg"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"{samples_path}: row {rownum}: {exc}") from exc
    return counts, ttas, densities


def _report_cells(out_dir: Path) -> list[dict]:
    counts, ttas, densities = _read_results(out_dir)
    cells = []
    for key in sorted(counts):
        name, fog = key
        cell = {"variant": name, "fog": fog, "runs": counts[key],
                "detected": len(ttas.get(key, [])), "tta_s": None,
                "density_pts_per_deg": None}
        if key in ttas:
            q1, med, q3 = quartiles(ttas[key])
            cell["tta_s"] = {"q1": q1, "median": med, "q3": q3}
        if key in densities:
            q1, med, q3 = quartiles(densities[key])
            cell["density_pts_per_deg"] = {"q1": q1, "median": med, "q3": q3}
        cells.append(cell)
    return cells


def cmd_report(results_dir: str, fmt: str = "table") -> int:
    out_dir = Path(results_dir)
    try:
        cells = _report_cells(out_dir)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if fmt == "json":
        print(json.dumps({"version": __version__, "cells": cells}, indent=2, sort_keys=True))
        return 0
    header = (f"{'variant':<22} {'fog':>5} {'runs':>4} {'det':>4} "
              f"{'tta q1':>8} {'tta med':>8} {'tta q3':>8} "
              f"{'dens q1':>9} {'dens med':>9} {'dens q3':>9}")
    print(header)
    print("-" * len(header))
    for c in cells:
        tta = c["tta_s"]
        dens = c["density_pts_per_deg"]
        tta_cols = tuple(f"{tta[k]:8.3f}" for k in ("q1", "median", "q3")) if tta else ("-".rjust(8),) * 3
        dens_cols = tuple(f"{dens[k]:9.4f}" for k in ("q1", "median", "q3")) if dens else ("-".rjust(9),) * 3
        print(f"{c['variant']:<22} {c['fog']:>5.2f} {c['runs']:>4} {c['detected']:>4} "
              f"{' '.join(tta_cols)} {' '.join(dens_cols)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazelidar",
        description="Deterministic 2D simulation of a gaze-aware adaptive spinning LiDAR.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a run config without running it")
    p_validate.add_argument("--config", required=True, help="path to a run config JSON file")

    p_run = sub.add_parser("run", help="run the configured sweep and write result files")
    p_run.add_argument("--config", required=True, help="path to a run config JSON file")
    p_run.add_argument("--out", required=True, help="directory for results.csv, density_samples.csv, summary.json")
    p_run.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p_run.add_argument("--seed-override", type=int, default=None,
                       help="replace the configured seed list with this single seed")

    p_report = sub.add_parser("report", help="summarize a results directory")
    p_report.add_argument("--out", required=True, help="results directory written by run")
    p_report.add_argument("--format", choices=("table", "json"), default="table")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args.config)
    if args.command == "run":
        return cmd_run(args.config, args.out, jobs=args.jobs, seed_override=args.seed_override)
    return cmd_report(args.out, fmt=args.format)


def entry() -> None:
    sys.exit(main())
