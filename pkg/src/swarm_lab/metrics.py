"""System-level quantities computed post-hoc from recorded trajectories.

Five numbers summarize a run: tracking performance Xi, exploration ratio
Theta, swarm density rho = N / L^2, local swarm density rho_L from
six-nearest-neighbor spacing, and their difference delta_rho = rho_L - rho
(positive when the swarm clusters beyond uniform spread).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .core import ConfigurationError
from .world import Arena


@dataclass(frozen=True)
class StepRecord:
    """One recorded step: coverage bit, exploration flags, agent positions."""

    t: int
    cov: int
    exploring_flags: np.ndarray  # (N,) bool
    positions: np.ndarray  # (N, 2) float64

    def __post_init__(self):
        if len(self.exploring_flags) != len(self.positions):
            raise ConfigurationError("flag and position counts must match")


@dataclass
class Trajectory:
    """Struct-of-arrays container for a run's recorded steps."""

    t: np.ndarray  # (T',) int64
    cov: np.ndarray  # (T',) uint8
    exploring: np.ndarray  # (T', N) bool
    positions: np.ndarray  # (T', N, 2) float64
    stride: int = 1

    @classmethod
    def from_steps(cls, steps: Sequence[StepRecord], stride: int = 1) -> "Trajectory":
        if len(steps) == 0:
            raise ConfigurationError("cannot build a trajectory from zero steps")
        return cls(
            t=np.array([s.t for s in steps], dtype=np.int64),
            cov=np.array([s.cov for s in steps], dtype=np.uint8),
            exploring=np.array([s.exploring_flags for s in steps], dtype=bool),
            positions=np.array([s.positions for s in steps], dtype=np.float64),
            stride=stride,
        )

    def steps(self) -> Iterable[StepRecord]:
        for i in range(len(self.t)):
            yield StepRecord(
                t=int(self.t[i]),
                cov=int(self.cov[i]),
                exploring_flags=self.exploring[i],
                positions=self.positions[i],
            )

    @property
    def n_agents(self) -> int:
        return self.positions.shape[1]

    def __len__(self) -> int:
        return len(self.t)


Records = Union[Trajectory, Sequence[StepRecord]]


def _as_trajectory(records: Records) -> Trajectory:
    if isinstance(records, Trajectory):
        return records
    return Trajectory.from_steps(list(records))


@dataclass(frozen=True)
class RunMetrics:
    Xi: float
    Theta: float
    rho: float
    rho_L: float
    delta_rho: float
    subsampled: bool = False  # True when computed from strided records

    def __post_init__(self):
        for name in ("Xi", "Theta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name}={v} outside [0, 1]")


def tracking_performance(records: Records) -> float:
    """Fraction of recorded steps with the target covered: (1/T) sum cov."""
    traj = _as_trajectory(records)
    if len(traj) == 0:
        raise ConfigurationError("tracking_performance needs at least one step")
    return float(np.mean(traj.cov))


def exploration_ratio(records: Records) -> float:
    """Time- and population-averaged fraction of agents in the exploring state."""
    traj = _as_trajectory(records)
    if len(traj) == 0 or traj.n_agents == 0:
        raise ConfigurationError("exploration_ratio needs steps and agents")
    return float(np.mean(traj.exploring))


def swarm_density(N: int, arena: Arena) -> float:
    """Global agent density N / L^2."""
    if N < 1:
        raise ConfigurationError(f"need at least one agent, got N={N}")
    return N / arena.L**2


def six_neighbor_mean_distances(positions: np.ndarray, neighbor_count: int = 6) -> np.ndarray:
    """Per-agent mean distance to its neighbor_count nearest other agents."""
    pos = np.asarray(positions, dtype=np.float64)
    n = pos.shape[0]
    if n < neighbor_count + 1:
        raise ConfigurationError(
            f"local density needs at least {neighbor_count + 1} agents, got {n}"
        )
    delta = pos[:, None, :] - pos[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", delta, delta))
    np.fill_diagonal(d, np.inf)
    nearest = np.partition(d, neighbor_count - 1, axis=1)[:, :neighbor_count]
    return nearest.mean(axis=1)


def local_swarm_density(
    records: Records, neighbor_count: int = 6, floor: float = 1e-6
) -> float:
    """Average of 7 / (pi * L_it^2) over agents and recorded steps.

    L_it is agent i's mean distance to its six nearest agents at step t
    (neighbor_count stays a knob to study other choices). Distances are
    floored at `floor` so coincident clumps cannot blow up the average; a
    warning flags any floored step.
    """
    traj = _as_trajectory(records)
    n = traj.n_agents
    if n < neighbor_count + 1:
        raise ConfigurationError(
            f"local density needs at least {neighbor_count + 1} agents, got {n}"
        )
    total = 0.0
    count = 0
    floored = 0
    # time-chunked so the (chunk, N, N) distance tensor stays small
    chunk = max(1, 2_000_000 // (n * n))
    for start in range(0, len(traj), chunk):
        pos = traj.positions[start : start + chunk]
        delta = pos[:, :, None, :] - pos[:, None, :, :]
        d = np.sqrt(np.einsum("tijk,tijk->tij", delta, delta))
        idx = np.arange(n)
        d[:, idx, idx] = np.inf
        li = np.partition(d, neighbor_count - 1, axis=2)[:, :, :neighbor_count].mean(axis=2)
        below = li < floor
        if below.any():
            floored += int(below.sum())
            li = np.maximum(li, floor)
        total += float(np.sum((neighbor_count + 1) / (math.pi * li**2)))
        count += li.size
    if floored:
        warnings.warn(
            f"local density floor {floor} applied to {floored} agent-steps",
            RuntimeWarning,
            stacklevel=2,
        )
    return total / count


def density_difference(rho_L: float, rho: float) -> float:
    """delta_rho = rho_L - rho; positive means clustering beyond uniform."""
    return rho_L - rho


def compute_run_metrics(records: Records, N: int, arena: Arena) -> RunMetrics:
    """All five run metrics from one recorded trajectory."""
    traj = _as_trajectory(records)
    rho = swarm_density(N, arena)
    rho_l = local_swarm_density(traj)
    return RunMetrics(
        Xi=tracking_performance(traj),
        Theta=exploration_ratio(traj),
        rho=rho,
        rho_L=rho_l,
        delta_rho=density_difference(rho_l, rho),
        subsampled=traj.stride > 1,
    )
