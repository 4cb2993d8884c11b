#!/usr/bin/env python3
"""Run the desk-scale experiment grids behind the acceptance gates and save
their tables. Handy for eyeballing phase curves before/without pytest."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from swarm_lab.behavior import Strategy
from swarm_lab.engine import SimConfig
from swarm_lab.files import results_to_csv_text
from swarm_lab.sweep import SweepSpec, run_sweep

RHO6 = [float(r) for r in np.geomspace(5e-4, 0.5, 6)]
RHO_REF = 0.0444  # transition-phase reference density


def desk_base(T: int) -> SimConfig:
    return SimConfig(N=0, L=1.0, k=0, T=T)


def sweep_specs(T: int, seeds: int) -> dict[str, SweepSpec]:
    return {
        "phase_k10": SweepSpec(
            N_values=[50], k_values=[10], rho_values=RHO6,
            seeds_per_cell=seeds, base_seed=101, base=desk_base(T),
        ),
        "crossover": SweepSpec(
            N_values=[50], k_values=[5, 35], rho_values=[0.02, RHO_REF, 0.1, 0.2],
            seeds_per_cell=seeds, base_seed=202, base=desk_base(T),
        ),
        "kscan50": SweepSpec(
            N_values=[50], k_values=[3, 4, 5, 10, 15, 25, 35], rho_values=[RHO_REF],
            seeds_per_cell=seeds, base_seed=303, base=desk_base(T),
        ),
        "kscan20": SweepSpec(
            N_values=[20], k_values=[3, 4, 5, 6, 10, 14], rho_values=[RHO_REF],
            seeds_per_cell=seeds, base_seed=404, base=desk_base(T),
        ),
        "baseline_k10": SweepSpec(
            N_values=[50], k_values=[10], rho_values=RHO6,
            strategies=[Strategy.MEMORYLESS_FIXED],
            seeds_per_cell=seeds, base_seed=505, base=desk_base(T),
        ),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="acceptance_tables")
    ap.add_argument("--T", type=int, default=20_000)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--parallelism", type=int, default=None)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, spec in sweep_specs(args.T, args.seeds).items():
        started = time.perf_counter()
        table = run_sweep(spec, parallelism=args.parallelism)
        if not table.ok:
            for err in table.errors:
                print(f"{name}: ERROR {err}", file=sys.stderr)
            return 1
        (out / f"{name}.csv").write_text(results_to_csv_text(table.rows))
        print(f"{name}: {len(table.rows)} rows in {time.perf_counter() - started:.0f}s", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
