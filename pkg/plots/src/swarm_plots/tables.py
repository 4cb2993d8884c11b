"""Loading and validating sweep result tables."""

from __future__ import annotations

from pathlib import Path

import pandas as pd

TABLE_COLUMNS = ["N", "L", "rho", "k", "strategy", "seed", "Xi", "Theta", "rho_L", "delta_rho"]


class TableError(ValueError):
    """The input table cannot back the requested figure."""


def load_table(paths: str | Path | list[str | Path]) -> pd.DataFrame:
    """Read one or more results.csv files into a single frame."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    frames = []
    for path in paths:
        path = Path(path)
        if not path.exists():
            raise TableError(f"table file not found: {path}")
        df = pd.read_csv(path)
        if df.empty:
            raise TableError(f"table {path} has no data rows")
        frames.append(df)
    return pd.concat(frames, ignore_index=True)


def require_columns(df: pd.DataFrame, needed: list[str], family: str) -> None:
    missing = [c for c in needed if c not in df.columns]
    if missing:
        raise TableError(
            f"family {family!r} needs columns {needed}; missing: {', '.join(missing)}"
        )
    if df.empty:
        raise TableError(f"family {family!r} got an empty table")


def aggregate(df: pd.DataFrame, by: list[str], value: str) -> pd.DataFrame:
    """Replicate mean and standard error of `value` grouped by `by`."""
    g = df.groupby(by, sort=True)[value]
    out = g.mean().rename("mean").to_frame()
    out["se"] = g.sem(ddof=1).fillna(0.0)
    return out.reset_index()
