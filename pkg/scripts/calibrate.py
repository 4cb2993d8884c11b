#!/usr/bin/env python3
"""Scan repulsion/memory constants against the phase-behavior probes.

Runs short simulations over a few marker densities and prints, per
candidate parameter set, the quantities the full experiment suite gates on:
high-density tracking, low-density failure, the k=5 / k=35 crossover, and
exploration ordering at the reference transition density. Used to pick the
package defaults; full-length sweeps confirm afterwards.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from itertools import product

import numpy as np

from swarm_lab.behavior import BehaviorParams, Strategy
from swarm_lab.engine import SimConfig, run
from swarm_lab.sweep import derive_seed, side_for_density


def probe_configs(params: BehaviorParams, T: int, seeds: int, boundary: str):
    """(label, config) pairs for one candidate parameter set."""
    jobs = []

    def add(label, n, rho, k, strategy=Strategy.ADAPTIVE):
        behavior = replace(params, strategy=strategy)
        for rep in range(seeds):
            cfg = SimConfig(
                N=n,
                L=side_for_density(n, rho),
                k=k,
                T=T,
                seed=derive_seed(1234, len(jobs), rep),
                behavior=behavior,
                boundary=boundary,
            )
            jobs.append((label, cfg))

    add("hi_dens_k10", 50, 0.5, 10)
    add("lo_dens_k10", 50, 5e-4, 10)
    add("mid_k10", 50, 0.02, 10)
    for rho, tag in [(0.01, "lo"), (0.0444, "mid"), (0.2, "hi")]:
        add(f"x_{tag}_k5", 50, rho, 5)
        add(f"x_{tag}_k35", 50, rho, 35)
    add("theta_k15", 50, 0.0444, 15)
    add("theta_k25", 50, 0.0444, 25)
    add("base_mid", 50, 0.02, 10, Strategy.MEMORYLESS_FIXED)
    add("base_hi", 50, 0.2, 10, Strategy.MEMORYLESS_FIXED)
    return jobs


def _execute(job):
    label, cfg = job
    rec = run(cfg)
    return label, rec.metrics.Xi, rec.metrics.Theta, rec.metrics.delta_rho


def summarize(label_rows):
    agg = {}
    for label, xi, theta, drho in label_rows:
        agg.setdefault(label, []).append((xi, theta, drho))
    out = {}
    for label, vals in agg.items():
        arr = np.array(vals)
        out[label] = arr.mean(axis=0)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--T", type=int, default=4000)
    ap.add_argument("--seeds", type=int, default=2)
    ap.add_argument("--boundary", default="clamp", choices=["clamp", "reflect"])
    ap.add_argument("--workers", type=int, default=2)
    ap.add_argument("--a-r-min", type=float, nargs="+", default=[0.5, 1.0, 1.5])
    ap.add_argument("--a-r-max", type=float, nargs="+", default=[2.0, 3.0, 5.0])
    ap.add_argument("--t-mem", type=int, nargs="+", default=[20, 50, 100])
    args = ap.parse_args()

    candidates = [
        BehaviorParams(a_R_min=lo, a_R_max=hi, t_mem=tm, a_R_fixed=hi)
        for lo, hi, tm in product(args.a_r_min, args.a_r_max, args.t_mem)
        if lo < hi
    ]
    print(
        f"# {len(candidates)} candidates, T={args.T}, seeds={args.seeds}, "
        f"boundary={args.boundary}",
        flush=True,
    )
    header = (
        "a_Rmin a_Rmax t_mem | hiXi loXi midXi | "
        "x_lo(5/35) x_mid(5/35) x_hi(5/35) | Th(5,15,25,35)@mid | baseXi(mid,hi)"
    )
    print(header, flush=True)

    for params in candidates:
        jobs = probe_configs(params, args.T, args.seeds, args.boundary)
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_execute, jobs, chunksize=4))
        s = summarize(rows)
        theta = [s[f"x_mid_k5"][1], s["theta_k15"][1], s["theta_k25"][1], s["x_mid_k35"][1]]
        print(
            f"{params.a_R_min:5.2f} {params.a_R_max:5.2f} {params.t_mem:5d} | "
            f"{s['hi_dens_k10'][0]:.3f} {s['lo_dens_k10'][0]:.3f} {s['mid_k10'][0]:.3f} | "
            f"{s['x_lo_k5'][0]:.2f}/{s['x_lo_k35'][0]:.2f} "
            f"{s['x_mid_k5'][0]:.2f}/{s['x_mid_k35'][0]:.2f} "
            f"{s['x_hi_k5'][0]:.2f}/{s['x_hi_k35'][0]:.2f} | "
            + ",".join(f"{t:.2f}" for t in theta)
            + f" | {s['base_mid'][0]:.2f},{s['base_hi'][0]:.2f}",
            flush=True,
        )


if __name__ == "__main__":
    sys.exit(main())
