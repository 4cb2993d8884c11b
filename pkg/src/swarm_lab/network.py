"""Time-varying topological k-nearest-neighbor communication graph.

The graph is directed (i listing j does not make j list i) and is rebuilt
from scratch every time-step by the engine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigurationError, check_finite


@dataclass(frozen=True)
class NeighborTable:
    """Per-agent neighbor indices, nearest first.

    indices[i] holds the k other agents closest to agent i, sorted by
    ascending distance; equal distances break toward the lower agent index.
    """

    indices: np.ndarray  # (N, k) int64
    k: int

    def row(self, i: int) -> np.ndarray:
        return self.indices[i]


def knn(positions: np.ndarray, k: int) -> NeighborTable:
    """Build the k-nearest-neighbor table from an (N, 2) position array.

    Requires 1 <= k <= N-1 (each agent needs k distinct others); the tighter
    run-time bound k >= 2 lives on SimConfig. Brute-force all-pairs
    distances; N stays small (<= 50 in every experiment here) so no spatial
    index is warranted.
    """
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2 or positions.shape[1] != 2:
        raise ConfigurationError(f"positions must be (N, 2), got {positions.shape}")
    check_finite(positions, "positions")
    n = positions.shape[0]
    if n < 3:
        raise ConfigurationError(f"need at least 3 agents, got {n}")
    if not 1 <= k <= n - 1:
        raise ConfigurationError(f"k must satisfy 1 <= k <= N-1 = {n - 1}, got {k}")

    return NeighborTable(indices=knn_indices(positions, k), k=k)


def knn_indices(positions: np.ndarray, k: int) -> np.ndarray:
    """Validation-free core of knn(); the engine calls this once per step."""
    delta = positions[:, None, :] - positions[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", delta, delta)
    np.fill_diagonal(d2, np.inf)
    # stable sort keeps ascending index order among exact distance ties
    return np.argsort(d2, axis=1, kind="stable")[:, :k].astype(np.int64)
