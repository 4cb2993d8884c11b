"""Deterministic multi-agent search-and-track simulator and sweep harness."""

__version__ = "0.1.0"

from .behavior import AgentState, BehaviorParams, Broadcast, MemoryEntry, Strategy
from .core import ConfigurationError, NumericHealthError, dist, limit_speed, make_rng
from .engine import RunRecord, SimConfig, init_state, run
from .metrics import RunMetrics, StepRecord, Trajectory, compute_run_metrics
from .network import NeighborTable, knn
from .sweep import ResultsTable, SweepSpec, materialize, run_sweep
from .world import Arena, TargetState, apply_boundary, coverage, target_step

__all__ = [
    "AgentState",
    "Arena",
    "BehaviorParams",
    "Broadcast",
    "ConfigurationError",
    "MemoryEntry",
    "NeighborTable",
    "NumericHealthError",
    "ResultsTable",
    "RunMetrics",
    "RunRecord",
    "SimConfig",
    "StepRecord",
    "Strategy",
    "SweepSpec",
    "TargetState",
    "Trajectory",
    "compute_run_metrics",
    "coverage",
    "dist",
    "init_state",
    "knn",
    "limit_speed",
    "make_rng",
    "materialize",
    "run",
    "run_sweep",
    "target_step",
    "apply_boundary",
]
