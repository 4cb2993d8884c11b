"""The figure families and their rendering rules.

Every family aggregates seed replicates into a mean line with a standard
error band; density axes are log-scaled. build_figure returns the matplotlib
figure plus a small report of what was drawn so callers (and tests) can
check series counts without parsing the image.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

from .tables import TableError, aggregate, load_table, require_columns


@dataclass
class FigureSpec:
    family: str
    table_paths: list[str]
    out_path: str


@dataclass
class FigureReport:
    family: str
    series: dict[str, list[str]] = field(default_factory=dict)  # axes label -> series labels
    log_x_axes: list[str] = field(default_factory=list)

    def series_count(self, axes_label: str) -> int:
        return len(self.series[axes_label])


def _cell_label(n, k) -> str:
    return f"N={n}, k={k}"


def _band(ax, x, mean, se):
    ax.plot(x, mean, marker="o", markersize=3, label=None)
    ax.fill_between(x, mean - se, mean + se, alpha=0.25)


def _per_cell_lines(ax, df, value, report, axes_label):
    cells = aggregate(df, ["N", "k", "rho"], value)
    labels = []
    for (n, k), group in cells.groupby(["N", "k"], sort=True):
        group = group.sort_values("rho")
        ax.plot(group["rho"], group["mean"], marker="o", markersize=3, label=_cell_label(n, k))
        ax.fill_between(
            group["rho"], group["mean"] - group["se"], group["mean"] + group["se"], alpha=0.25
        )
        labels.append(_cell_label(n, k))
    ax.set_xscale("log")
    ax.set_xlabel(r"swarm density $\rho$")
    report.series[axes_label] = labels
    report.log_x_axes.append(axes_label)


def phase_curve(df: pd.DataFrame, report: FigureReport):
    require_columns(df, ["N", "k", "rho", "Xi"], "phase-curve")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    _per_cell_lines(ax, df, "Xi", report, "main")
    ax.set_ylabel(r"tracking performance $\Xi$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    return fig


def density_difference(df: pd.DataFrame, report: FigureReport):
    require_columns(df, ["N", "k", "rho", "delta_rho"], "density-difference")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    _per_cell_lines(ax, df, "delta_rho", report, "main")
    ax.set_ylabel(r"density difference $\Delta\rho$")
    ax.legend(fontsize=8)
    return fig


def xi_theta_vs_rho(df: pd.DataFrame, report: FigureReport):
    require_columns(df, ["N", "k", "rho", "Xi", "Theta"], "Xi-Theta-vs-rho")
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    _per_cell_lines(ax1, df, "Xi", report, "Xi")
    _per_cell_lines(ax2, df, "Theta", report, "Theta")
    ax1.set_ylabel(r"$\Xi$")
    ax2.set_ylabel(r"$\Theta$")
    ax1.set_ylim(-0.02, 1.02)
    ax2.set_ylim(-0.02, 1.02)
    ax1.legend(fontsize=8)
    return fig


def crossover(df: pd.DataFrame, report: FigureReport):
    require_columns(df, ["N", "k", "rho", "Xi", "Theta"], "crossover")
    fig, (ax1, ax2, ax3) = plt.subplots(1, 3, figsize=(13, 4))
    _per_cell_lines(ax1, df, "Xi", report, "Xi")
    _per_cell_lines(ax2, df, "Theta", report, "Theta")
    ax1.set_ylabel(r"$\Xi$")
    ax2.set_ylabel(r"$\Theta$")

    # performance/exploration balance: one point cloud per cell, the dotted
    # line marks the exploration level of the best-tracking cell mean
    cells = aggregate(df, ["N", "k", "rho"], "Xi").merge(
        aggregate(df, ["N", "k", "rho"], "Theta"),
        on=["N", "k", "rho"],
        suffixes=("_xi", "_theta"),
    )
    labels = []
    for (n, k), group in cells.groupby(["N", "k"], sort=True):
        ax3.scatter(group["mean_theta"], group["mean_xi"], s=18, label=_cell_label(n, k))
        labels.append(_cell_label(n, k))
    best = cells.loc[cells["mean_xi"].idxmax()]
    ax3.axvline(best["mean_theta"], linestyle=":", color="k")
    ax3.set_xlabel(r"exploration ratio $\Theta$")
    ax3.set_ylabel(r"$\Xi$")
    report.series["balance"] = labels
    ax1.legend(fontsize=8)
    fig.tight_layout()
    return fig


def k_over_n_collapse(df: pd.DataFrame, report: FigureReport):
    require_columns(df, ["N", "k", "rho", "Xi", "Theta"], "k/N-collapse")
    # this family reads a fixed-density k scan; keep the density with the
    # widest k coverage if several are present
    counts = df.groupby("rho")["k"].nunique()
    rho0 = counts.idxmax()
    sub = df[df["rho"] == rho0]
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharey="row")
    for row, value in enumerate(["Theta", "Xi"]):
        for col, xdef in enumerate(["k", "k/N"]):
            ax = axes[row][col]
            labels = []
            for n, group in sub.groupby("N", sort=True):
                agg = aggregate(group, ["k"], value).sort_values("k")
                x = agg["k"] if xdef == "k" else agg["k"] / n
                _band(ax, x, agg["mean"], agg["se"])
                labels.append(f"N={n}")
            ax.set_xlabel(xdef)
            if col == 0:
                ax.set_ylabel(value)
            report.series[f"{value} vs {xdef}"] = labels
    axes[0][0].legend([f"N={n}" for n in sorted(sub["N"].unique())], fontsize=8)
    fig.suptitle(f"fixed density rho={rho0:g}")
    fig.tight_layout()
    return fig


def baseline_comparison(df: pd.DataFrame, report: FigureReport):
    require_columns(df, ["N", "k", "rho", "Xi", "strategy"], "baseline-comparison")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = []
    for (strategy, n, k), group in df.groupby(["strategy", "N", "k"], sort=True):
        agg = aggregate(group, ["rho"], "Xi").sort_values("rho")
        ax.plot(agg["rho"], agg["mean"], marker="o", markersize=3,
                label=f"{strategy} ({_cell_label(n, k)})")
        ax.fill_between(agg["rho"], agg["mean"] - agg["se"], agg["mean"] + agg["se"], alpha=0.25)
        labels.append(str(strategy))
    ax.set_xscale("log")
    ax.set_xlabel(r"swarm density $\rho$")
    ax.set_ylabel(r"$\Xi$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    report.series["main"] = labels
    report.log_x_axes.append("main")
    return fig


FAMILIES = {
    "phase-curve": phase_curve,
    "density-difference": density_difference,
    "Xi-Theta-vs-rho": xi_theta_vs_rho,
    "crossover": crossover,
    "k/N-collapse": k_over_n_collapse,
    "baseline-comparison": baseline_comparison,
}


def build_figure(df: pd.DataFrame, family: str) -> tuple[plt.Figure, FigureReport]:
    if family not in FAMILIES:
        raise TableError(f"unknown family {family!r}; valid: {', '.join(sorted(FAMILIES))}")
    report = FigureReport(family=family)
    fig = FAMILIES[family](df, report)
    return fig, report


def render(spec: FigureSpec) -> FigureReport:
    """Render one family to an image file; returns the drawing report."""
    df = load_table(spec.table_paths)
    fig, report = build_figure(df, spec.family)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return report
