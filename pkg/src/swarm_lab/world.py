"""Bounded square arena, waypoint-driven target, detection, boundary rules."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import ConfigurationError, Vec2, check_finite, dist


@dataclass(frozen=True)
class Arena:
    """Square search space [0, L] x [0, L]."""

    L: float

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0):
            raise ConfigurationError(f"arena side must be positive, got {self.L}")

    def contains(self, p: np.ndarray) -> bool:
        p = np.asarray(p)
        return bool(np.all(p >= 0.0) and np.all(p <= self.L))


@dataclass(frozen=True)
class TargetState:
    """Fast non-evasive target: heads to a waypoint, redraws on arrival.

    Detection is a binary disc: tracked iff some agent is within radius r.
    """

    pos: Vec2
    waypoint: Vec2
    v_o_max: float = 0.15
    r: float = 1.0


def draw_point(arena: Arena, rng: np.random.Generator) -> Vec2:
    """Uniform point in the arena; consumes exactly two draws (x then y)."""
    return rng.random(2) * arena.L


def target_step(target: TargetState, arena: Arena, rng: np.random.Generator) -> TargetState:
    """Advance the target one step along its waypoint policy.

    Moves min(v_o_max, remaining) straight toward the waypoint. On arrival
    (remaining <= v_o_max) it lands on the waypoint, draws a fresh uniform
    waypoint, and spends any leftover travel budget toward it, so the target
    never idles mid-step. Per-step path length never exceeds v_o_max.
    """
    pos = np.asarray(target.pos, dtype=np.float64)
    wp = np.asarray(target.waypoint, dtype=np.float64)
    remaining = dist(pos, wp)
    if remaining > target.v_o_max:
        pos = pos + (wp - pos) * (target.v_o_max / remaining)
        return replace(target, pos=pos)

    # arrival: land exactly, redraw once, continue with the leftover budget
    pos = wp
    leftover = target.v_o_max - remaining
    wp = draw_point(arena, rng)
    gap = dist(pos, wp)
    if gap > 0.0 and leftover > 0.0:
        pos = pos + (wp - pos) * (min(leftover, gap) / gap)
    return replace(target, pos=pos, waypoint=wp)


def coverage(agent_positions: np.ndarray, target: TargetState) -> int:
    """1 iff at least one agent lies within the target's radius (inclusive)."""
    pos = np.asarray(agent_positions, dtype=np.float64)
    check_finite(pos, "agent positions")
    delta = pos - np.asarray(target.pos)[None, :]
    d2 = np.einsum("ij,ij->i", delta, delta)
    return int(np.any(d2 <= target.r * target.r))


def apply_boundary(pos: np.ndarray, arena: Arena) -> np.ndarray:
    """Clamp each coordinate to [0, L]; stored velocities are untouched."""
    return np.clip(np.asarray(pos, dtype=np.float64), 0.0, arena.L)


def apply_boundary_reflect(
    pos: np.ndarray, vel: np.ndarray, arena: Arena
) -> tuple[np.ndarray, np.ndarray]:
    """Specular reflection alternative to the clamp (SimConfig.boundary="reflect").

    Positions are folded back into the arena and the offending velocity
    components flip sign. One fold handles every step size that occurs here
    (per-step travel is far below L), but we iterate defensively.
    """
    p = np.array(pos, dtype=np.float64, copy=True)
    v = np.array(vel, dtype=np.float64, copy=True)
    for _ in range(8):
        low = p < 0.0
        high = p > arena.L
        if not (low.any() or high.any()):
            break
        p[low] = -p[low]
        p[high] = 2.0 * arena.L - p[high]
        v[low | high] *= -1.0
    else:
        p = np.clip(p, 0.0, arena.L)
    return p, v
