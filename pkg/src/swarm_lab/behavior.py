"""Per-agent decision logic: memory-backed attraction and adaptive repulsion.

Each step an agent (1) refreshes its single-slot memory of the last target
sighting from its own sensor and from neighbor broadcasts, (2) raises or
lowers its repulsion strength depending on whether it is exploring or
tracking, and (3) moves under the sum of a social attraction velocity and an
inverse-power inter-agent repulsion, capped at its maximum speed.

These functions are the readable single-agent reference; the engine runs a
vectorized equivalent of the same pipeline and is property-tested against
this one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import ConfigurationError, Vec2, limit_speed, powi, rescale_speed, splitmix64

# sentinel older than any reachable expiry horizon; keeps int arithmetic exact
EMPTY_T = -(2**40)


class Strategy(str, enum.Enum):
    ADAPTIVE = "adaptive"
    MEMORYLESS_FIXED = "memoryless"


class MemoryEntry(NamedTuple):
    p: Vec2
    t_best: int


class AttractionUpdate(NamedTuple):
    p: Vec2
    exploring: bool
    memory: Optional[MemoryEntry]


@dataclass
class Broadcast:
    """What one neighbor shares: its freshest sighting, or nothing."""

    sender: int
    p: Optional[Vec2] = None
    t_best: Optional[int] = None

    def __post_init__(self):
        if (self.p is None) != (self.t_best is None):
            raise ConfigurationError("broadcast must carry both p and t_best or neither")


@dataclass
class BehaviorParams:
    """Strategy constants.

    omega, c, d, delta_explore, delta_track are fixed by the strategy
    definition; t_mem, a_R_min, a_R_max (and the memoryless baseline's pinned
    a_R_fixed) are implementation-calibrated and recorded in run metadata.
    """

    omega: float = 1.0
    c: float = 0.5
    t_mem: int = 50
    a_R_min: float = 0.75
    a_R_max: float = 3.0
    a_R_fixed: float = 3.0  # pinned repulsion for the memoryless baseline
    d: int = 6
    delta_explore: float = 0.1
    delta_track: float = 0.75
    strategy: Strategy = Strategy.ADAPTIVE
    eps_coincident: float = 1e-6

    def validate(self) -> list[str]:
        problems = []
        if not self.a_R_min < self.a_R_max:
            problems.append(f"a_R_min={self.a_R_min} must be < a_R_max={self.a_R_max}")
        if self.a_R_min <= 0:
            problems.append(f"a_R_min must be positive, got {self.a_R_min}")
        if self.a_R_fixed <= 0:
            problems.append(f"a_R_fixed must be positive, got {self.a_R_fixed}")
        if self.d < 1:
            problems.append(f"repulsion exponent d must be >= 1, got {self.d}")
        if self.delta_explore <= 0 or self.delta_track <= 0:
            problems.append("delta_explore and delta_track must be positive")
        if self.c < 0:
            problems.append(f"social weight c must be >= 0, got {self.c}")
        if self.omega < 0:
            problems.append(f"inertia omega must be >= 0, got {self.omega}")
        if self.t_mem < 0:
            problems.append(f"t_mem must be >= 0, got {self.t_mem}")
        if self.eps_coincident <= 0:
            problems.append("eps_coincident must be positive")
        return problems

    @property
    def effective_t_mem(self) -> int:
        """Memory duration actually applied; the baseline strategy has none."""
        return 0 if self.strategy is Strategy.MEMORYLESS_FIXED else self.t_mem


@dataclass
class AgentState:
    id: int
    pos: Vec2
    vel: Vec2
    a_R: float
    exploring: bool = True
    memory: Optional[MemoryEntry] = None


def update_point_of_attraction(
    agent: AgentState,
    detected_target: Optional[Vec2],
    neighbor_broadcasts: Sequence[Broadcast],
    t: int,
    params: BehaviorParams,
) -> AttractionUpdate:
    """Pick the freshest unexpired target sighting, or fall back to exploring.

    A direct detection overwrites memory with (target position, t). The
    freshest neighbor broadcast competes with the agent's own entry; entries
    with t_best + t_mem < t are discarded on both sides. Own information wins
    only when strictly fresher; ties fall through to the neighbor entry (the
    position value is identical either way, both record the same sighting
    instant). With nothing left, the point of attraction collapses to the
    agent's own position, which disables attraction and flags the agent as
    exploring.

    Memory stores own sightings only. Neighbors' entries steer this step's
    attraction but are not adopted for rebroadcast, so a sighting reaches
    exactly the detector and whoever counts a current holder among its k
    nearest: connectivity caps how many agents a sighting can engage.
    """
    mem = agent.memory
    if detected_target is not None:
        mem = MemoryEntry(p=np.asarray(detected_target, dtype=np.float64), t_best=t)

    best_neigh: Optional[MemoryEntry] = None
    for b in neighbor_broadcasts:
        if b.p is None:
            continue
        if best_neigh is None or b.t_best > best_neigh.t_best:
            best_neigh = MemoryEntry(p=np.asarray(b.p, dtype=np.float64), t_best=b.t_best)

    horizon = params.effective_t_mem
    if mem is not None and mem.t_best + horizon < t:
        mem = None
    if best_neigh is not None and best_neigh.t_best + horizon < t:
        best_neigh = None

    if mem is None and best_neigh is None:
        return AttractionUpdate(p=np.array(agent.pos, copy=True), exploring=True, memory=None)
    if best_neigh is None or (mem is not None and mem.t_best > best_neigh.t_best):
        chosen = mem
    else:
        chosen = best_neigh
    return AttractionUpdate(p=np.array(chosen.p, copy=True), exploring=False, memory=mem)


def attraction_velocity(
    agent: AgentState, p: Vec2, params: BehaviorParams, rng: np.random.Generator
) -> Vec2:
    """Social attraction: omega * v_prev + c * r * (p - pos), r ~ U[0, 1)."""
    r = rng.random()
    return params.omega * np.asarray(agent.vel, dtype=np.float64) + params.c * r * (
        np.asarray(p, dtype=np.float64) - np.asarray(agent.pos, dtype=np.float64)
    )


def update_repulsion_strength(agent: AgentState, params: BehaviorParams) -> float:
    """Shrink repulsion while tracking, grow it while exploring, inside bounds.

    The memoryless baseline keeps its configured constant instead.
    """
    if params.strategy is Strategy.MEMORYLESS_FIXED:
        return params.a_R_fixed
    if agent.exploring:
        return min(agent.a_R + params.delta_explore, params.a_R_max)
    return max(agent.a_R - params.delta_track, params.a_R_min)


def pair_unit(i: int, j: int) -> Vec2:
    """Deterministic pseudo-random unit vector for a coincident pair.

    Direction depends only on the unordered pair; swapping the endpoints
    flips the sign, so both agents push apart along one common axis.
    """
    lo, hi = (i, j) if i < j else (j, i)
    h = splitmix64(((lo & 0xFFFFFFFF) << 32) | (hi & 0xFFFFFFFF))
    angle = 2.0 * math.pi * (h / 2.0**64)
    u = np.array([math.cos(angle), math.sin(angle)])
    return u if i < j else -u


def repulsion_velocity(
    agent: AgentState, neighbor_states: Sequence[AgentState], params: BehaviorParams
) -> Vec2:
    """Inverse-power repulsion from the topological neighborhood.

    v_rep = -sum_j (a_R / r_ij)^d * unit(i -> j), using the agent's own
    repulsion strength. Coincident pairs (r_ij below eps_coincident) fall
    back to distance eps along a deterministic pair direction.
    """
    pos = np.asarray(agent.pos, dtype=np.float64)
    total = np.zeros(2)
    for nb in neighbor_states:
        rvec = np.asarray(nb.pos, dtype=np.float64) - pos
        rij = float(np.sqrt(rvec[0] * rvec[0] + rvec[1] * rvec[1]))
        if rij < params.eps_coincident:
            rvec = params.eps_coincident * pair_unit(agent.id, nb.id)
            rij = params.eps_coincident
        total -= powi(agent.a_R / rij, params.d) / rij * rvec
    return total


def step_agent(
    agent: AgentState,
    p: Vec2,
    neighbors: Sequence[AgentState],
    params: BehaviorParams,
    v_a_max: float,
    rng: np.random.Generator,
    limit_mode: str = "clamp",
) -> AgentState:
    """Combine attraction and repulsion, cap the speed, and move.

    Expects p, exploring, memory, and a_R to be already updated for this
    step. The caller applies the arena boundary rule to the returned
    position.
    """
    v = attraction_velocity(agent, p, params, rng) + repulsion_velocity(
        agent, neighbors, params
    )
    limiter = rescale_speed if limit_mode == "rescale" else limit_speed
    v = limiter(v, v_a_max)
    return replace(agent, pos=np.asarray(agent.pos, dtype=np.float64) + v, vel=v)
