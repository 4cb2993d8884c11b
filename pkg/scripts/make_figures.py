#!/usr/bin/env python3
"""Produce every figure family from the acceptance-grade sweep tables.

Reuses tables under --tables if they exist (run scripts/acceptance_sweeps.py
to create them); renders via the separately installed `plots` CLI so the
figure stack stays decoupled from the simulator.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

FAMILY_TABLES = {
    "phase-curve": ["phase_k10.csv", "crossover.csv"],
    "density-difference": ["phase_k10.csv"],
    "Xi-Theta-vs-rho": ["crossover.csv"],
    "crossover": ["crossover.csv"],
    "k/N-collapse": ["kscan50.csv", "kscan20.csv"],
    "baseline-comparison": ["phase_k10.csv", "baseline_k10.csv"],
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tables", default="acceptance_tables")
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()

    tables = Path(args.tables)
    if not tables.is_dir():
        print(
            f"{tables} not found; run scripts/acceptance_sweeps.py --out {tables} first",
            file=sys.stderr,
        )
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for family, files in FAMILY_TABLES.items():
        paths = [tables / f for f in files]
        missing = [p for p in paths if not p.exists()]
        if missing:
            print(f"skipping {family}: missing {missing}", file=sys.stderr)
            continue
        target = out / f"{family.replace('/', '_')}.png"
        cmd = ["plots", "--table", *map(str, paths), "--family", family, "--out", str(target)]
        print("$", " ".join(cmd), flush=True)
        result = subprocess.run(cmd)
        if result.returncode != 0:
            return result.returncode
    return 0


if __name__ == "__main__":
    sys.exit(main())
