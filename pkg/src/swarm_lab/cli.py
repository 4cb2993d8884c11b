"""Command-line harness: `sweep`, `run`, and `metrics` subcommands."""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .core import ConfigurationError
from .engine import run as run_sim
from .files import (
    config_to_kv_lines,
    format_float,
    load_records,
    parse_kv_file,
    results_to_csv_text,
    save_records,
    sim_config_from_mapping,
)
from .metrics import compute_run_metrics
from .sweep import run_sweep, sweep_spec_from_mapping
from .world import Arena

PROFILES = {"desk": 20_000, "paper": 100_000}


def _metrics_lines(m) -> list[str]:
    return [
        f"Xi = {format_float(m.Xi)}",
        f"Theta = {format_float(m.Theta)}",
        f"rho = {format_float(m.rho)}",
        f"rho_L = {format_float(m.rho_L)}",
        f"delta_rho = {format_float(m.delta_rho)}",
        f"subsampled = {str(m.subsampled).lower()}",
    ]


def _cmd_sweep(args) -> int:
    mapping = parse_kv_file(args.spec)
    if args.profile and "T" not in mapping:
        mapping = dict(mapping)
        mapping["T"] = str(PROFILES[args.profile])
    spec = sweep_spec_from_mapping(mapping)
    started = time.perf_counter()
    table = run_sweep(spec, parallelism=args.parallelism)
    elapsed = time.perf_counter() - started

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "results.csv").write_text(results_to_csv_text(table.rows))

    meta = [
        f"swarm_lab_version = {__version__}",
        f"spec_file = {args.spec}",
        f"profile = {args.profile or 'none'}",
        f"base_seed = {spec.base_seed}",
        f"seeds_per_cell = {spec.seeds_per_cell}",
        f"T = {spec.base.T}",
        f"boundary = {spec.base.boundary}",
        f"limit_mode = {spec.base.limit_mode}",
        f"t_mem = {spec.base.behavior.t_mem}",
        f"a_R_min = {spec.base.behavior.a_R_min!r}",
        f"a_R_max = {spec.base.behavior.a_R_max!r}",
        f"a_R_fixed = {spec.base.behavior.a_R_fixed!r}",
        f"rows = {len(table.rows)}",
        f"errors = {len(table.errors)}",
        f"sweep_wall_time_s = {elapsed!r}",
    ]
    meta.append("# per-row wall times, in table order")
    for row in table.rows:
        meta.append(
            f"wall_time_s[N={row.N},rho={format_float(row.rho)},k={row.k},"
            f"strategy={row.strategy},seed={row.seed}] = {row.wall_time_s!r}"
        )
    for err in table.errors:
        meta.append(
            f"error[cell={err.cell_index},replicate={err.replicate},seed={err.seed}] = {err.message}"
        )
    (out_dir / "metadata.txt").write_text("\n".join(meta) + "\n")

    print(f"wrote {len(table.rows)} rows to {out_dir / 'results.csv'} in {elapsed:.1f}s")
    if table.errors:
        for err in table.errors:
            print(
                f"error: cell {err.cell_index} replicate {err.replicate}: {err.message}",
                file=sys.stderr,
            )
        return 1
    return 0


def _cmd_run(args) -> int:
    config = sim_config_from_mapping(parse_kv_file(args.config))
    if args.profile:
        config = replace(config, T=PROFILES[args.profile])
    record = run_sim(config)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_records(out_dir / "records.npz", record.records, config)
    (out_dir / "metrics.txt").write_text("\n".join(_metrics_lines(record.metrics)) + "\n")
    meta = config_to_kv_lines(config) + [
        f"swarm_lab_version = {__version__}",
        f"wall_time_s = {record.wall_time_s!r}",
    ]
    (out_dir / "metadata.txt").write_text("\n".join(meta) + "\n")
    for line in _metrics_lines(record.metrics):
        print(line)
    return 0


def _cmd_metrics(args) -> int:
    records, config = load_records(args.records)
    m = compute_run_metrics(records, config.N, Arena(config.L))
    for line in _metrics_lines(m):
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarm-lab",
        description="Deterministic swarm search-and-track simulator and sweep harness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep from a spec file")
    p_sweep.add_argument("--spec", required=True, help="sweep spec file (key = value lines)")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--parallelism", type=int, default=None)
    p_sweep.add_argument("--profile", choices=sorted(PROFILES), default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_run = sub.add_parser("run", help="run a single simulation from a config file")
    p_run.add_argument("--config", required=True, help="run config file (key = value lines)")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--profile", choices=sorted(PROFILES), default=None)
    p_run.set_defaults(func=_cmd_run)

    p_metrics = sub.add_parser("metrics", help="recompute metrics from stored records")
    p_metrics.add_argument("--records", required=True, help="records .npz written by `run`")
    p_metrics.set_defaults(func=_cmd_metrics)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
