"""Deterministic run loop wiring world, network, and behavior together.

Stage order within step t (synchronous, double-buffered):

1. the target advances along its waypoint policy;
2. agents within the detection radius refresh their memory with the
   target's position at t;
3. the k-nearest-neighbor table is rebuilt from positions at t;
4. every agent picks its point of attraction from its own memory and its
   neighbors' broadcasts (a broadcast carries the sender's memory as of the
   end of step t-1, except that a direct detection made this step is
   broadcast immediately);
5. every agent updates its repulsion strength from its exploring flag;
6. attraction and repulsion velocities are combined, speed-capped, and all
   agents move at once; the boundary rule is applied.

RNG draw order per run: initial agent positions (row-major), target
position, first waypoint; then per step, waypoint redraws (x, y) when the
target arrives, followed by one length-N attraction draw in ascending agent
id. Everything downstream is a pure function of the config, so identical
configs (seed included) reproduce bit-identical records.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .behavior import (
    EMPTY_T,
    AgentState,
    BehaviorParams,
    Strategy,
    pair_unit,
)
from .core import _LIMIT_SLACK, ConfigurationError, NumericHealthError, make_rng, powi
from .metrics import RunMetrics, Trajectory, compute_run_metrics
from .network import knn_indices
from .world import Arena, TargetState, apply_boundary, apply_boundary_reflect, draw_point, target_step


@dataclass
class SimConfig:
    N: int
    L: float
    k: int
    v_a_max: float = 0.1
    v_o_max: float = 0.15
    r: float = 1.0
    T: int = 100_000
    seed: int = 0
    behavior: BehaviorParams = field(default_factory=BehaviorParams)
    record_stride: int = 1
    boundary: str = "clamp"  # "clamp" | "reflect"
    limit_mode: str = "clamp"  # "clamp" | "rescale" (A/B of the speed rule)
    debug_checks: bool = False

    @property
    def rho(self) -> float:
        return self.N / self.L**2

    def validate(self) -> None:
        """Raise a ConfigurationError naming every violated bound."""
        problems = []
        if self.N < 7:
            problems.append(f"N={self.N} (need N >= 7 so local density is defined)")
        if not (np.isfinite(self.L) and self.L > 0):
            problems.append(f"L={self.L} (need L > 0)")
        if self.N >= 7 and not 2 <= self.k <= self.N - 1:
            problems.append(f"k={self.k} (need 2 <= k <= N-1 = {self.N - 1})")
        if self.T < 1:
            problems.append(f"T={self.T} (need T >= 1)")
        if self.v_a_max <= 0:
            problems.append(f"v_a_max={self.v_a_max} (need > 0)")
        if self.v_o_max <= 0:
            problems.append(f"v_o_max={self.v_o_max} (need > 0)")
        if self.r <= 0:
            problems.append(f"r={self.r} (need > 0)")
        if self.record_stride < 1:
            problems.append(f"record_stride={self.record_stride} (need >= 1)")
        if self.boundary not in ("clamp", "reflect"):
            problems.append(f"boundary={self.boundary!r} (clamp or reflect)")
        if self.limit_mode not in ("clamp", "rescale"):
            problems.append(f"limit_mode={self.limit_mode!r} (clamp or rescale)")
        if not 0 <= int(self.seed) < 2**64:
            problems.append(f"seed={self.seed} (need unsigned 64-bit)")
        problems.extend(self.behavior.validate())
        if problems:
            raise ConfigurationError("invalid config: " + "; ".join(problems))
        if self.v_a_max >= self.v_o_max:
            warnings.warn(
                f"v_a_max={self.v_a_max} >= v_o_max={self.v_o_max}: outside the "
                "faster-target regime this strategy is built for",
                RuntimeWarning,
                stacklevel=2,
            )


@dataclass
class RunRecord:
    config: SimConfig
    records: Trajectory
    metrics: RunMetrics
    wall_time_s: float
    seed: int


def initial_repulsion(params: BehaviorParams) -> float:
    """Agents start maximally exploratory; the baseline starts at its constant."""
    if params.strategy is Strategy.MEMORYLESS_FIXED:
        return params.a_R_fixed
    return params.a_R_max


def init_state(config: SimConfig, rng: np.random.Generator) -> tuple[list[AgentState], TargetState]:
    """Uniform-random placements: N agents (zero velocity, exploring, empty
    memory, repulsion at its ceiling), then the target, then its waypoint."""
    config.validate()
    arena = Arena(config.L)
    positions = rng.random((config.N, 2)) * config.L
    a0 = initial_repulsion(config.behavior)
    agents = [
        AgentState(id=i, pos=positions[i].copy(), vel=np.zeros(2), a_R=a0)
        for i in range(config.N)
    ]
    target = TargetState(
        pos=draw_point(arena, rng),
        waypoint=draw_point(arena, rng),
        v_o_max=config.v_o_max,
        r=config.r,
    )
    return agents, target


def _repulsion_batch(
    pos: np.ndarray, nbr: np.ndarray, a_R: np.ndarray, d: int, eps: float
) -> np.ndarray:
    """Vectorized inverse-power repulsion over the neighbor table."""
    rvec = pos[nbr] - pos[:, None, :]  # (N, k, 2), i -> j
    rij = np.sqrt(np.einsum("ijk,ijk->ij", rvec, rvec))
    if np.any(rij < eps):
        rows, cols = np.nonzero(rij < eps)
        for i, c in zip(rows, cols):
            j = nbr[i, c]
            rvec[i, c] = eps * pair_unit(int(i), int(j))
            rij[i, c] = eps
    pref = powi(a_R[:, None] / rij, d)
    return -np.einsum("ij,ijk->ik", pref / rij, rvec)


def run(config: SimConfig) -> RunRecord:
    """Execute T steps and return records plus post-hoc metrics."""
    config.validate()
    started = time.perf_counter()
    rng = make_rng(config.seed)
    agents, target = init_state(config, rng)
    arena = Arena(config.L)
    params = config.behavior
    n, t_total, stride = config.N, config.T, config.record_stride
    horizon = params.effective_t_mem
    adaptive = params.strategy is Strategy.ADAPTIVE
    clamp = config.limit_mode == "clamp"

    pos = np.stack([a.pos for a in agents])
    vel = np.zeros((n, 2))
    a_r = np.full(n, initial_repulsion(params))
    mem_p = np.zeros((n, 2))
    mem_t = np.full(n, EMPTY_T, dtype=np.int64)
    rows = np.arange(n)

    n_rec = (t_total + stride - 1) // stride
    rec_t = np.empty(n_rec, dtype=np.int64)
    rec_cov = np.empty(n_rec, dtype=np.uint8)
    rec_exploring = np.empty((n_rec, n), dtype=bool)
    rec_positions = np.empty((n_rec, n, 2), dtype=np.float64)
    rec_i = 0

    r2 = config.r * config.r
    for t in range(1, t_total + 1):
        target = target_step(target, arena, rng)

        delta = pos - target.pos[None, :]
        detected = np.einsum("ij,ij->i", delta, delta) <= r2
        cov = bool(detected.any())
        if cov:
            mem_p[detected] = target.pos
            mem_t[detected] = t

        nbr = knn_indices(pos, config.k)

        # freshest neighbor broadcast (own-sensed entries only); argmax takes
        # the first (nearest) holder on ties
        nt = mem_t[nbr]
        best = np.argmax(nt, axis=1)
        t_neigh = nt[rows, best]
        p_neigh = mem_p[nbr[rows, best]]

        own_ok = mem_t + horizon >= t
        neigh_ok = t_neigh + horizon >= t
        use_own = own_ok & (~neigh_ok | (mem_t > t_neigh))
        use_neigh = neigh_ok & ~use_own
        exploring = ~(use_own | use_neigh)

        mem_t = np.where(own_ok, mem_t, EMPTY_T)  # expired own entries are discarded
        p_att = np.where(
            use_own[:, None], mem_p, np.where(use_neigh[:, None], p_neigh, pos)
        )

        if adaptive:
            a_r = np.where(
                exploring,
                np.minimum(a_r + params.delta_explore, params.a_R_max),
                np.maximum(a_r - params.delta_track, params.a_R_min),
            )

        draw = rng.random(n)
        v_att = params.omega * vel + params.c * draw[:, None] * (p_att - pos)
        v_rep = _repulsion_batch(pos, nbr, a_r, params.d, params.eps_coincident)
        vel = v_att + v_rep
        # speed rule, inlined (same math as core.limit_speed / core.rescale_speed)
        norm = np.sqrt(np.einsum("ij,ij->i", vel, vel))[:, None]
        scale = np.ones_like(norm)
        over = (norm > config.v_a_max * _LIMIT_SLACK) if clamp else (norm > 0)
        np.divide(config.v_a_max, norm, out=scale, where=over)
        vel = vel * scale
        pos = pos + vel
        if config.boundary == "reflect":
            pos, vel = apply_boundary_reflect(pos, vel, arena)
        else:
            pos = apply_boundary(pos, arena)

        if not (np.isfinite(pos).all() and np.isfinite(vel).all()):
            raise NumericHealthError(f"non-finite agent state at step {t}")

        if config.debug_checks:
            _debug_assertions(config, t, pos, vel, a_r, exploring, mem_t, horizon, arena)

        if (t - 1) % stride == 0:
            rec_t[rec_i] = t
            rec_cov[rec_i] = cov
            rec_exploring[rec_i] = exploring
            rec_positions[rec_i] = pos
            rec_i += 1

    traj = Trajectory(
        t=rec_t, cov=rec_cov, exploring=rec_exploring, positions=rec_positions, stride=stride
    )
    run_metrics = compute_run_metrics(traj, config.N, arena)
    return RunRecord(
        config=config,
        records=traj,
        metrics=run_metrics,
        wall_time_s=time.perf_counter() - started,
        seed=config.seed,
    )


def _debug_assertions(config, t, pos, vel, a_r, exploring, mem_t, horizon, arena):
    params = config.behavior
    speed = np.sqrt(np.einsum("ij,ij->i", vel, vel))
    assert np.all(speed <= config.v_a_max * (1 + 1e-12)), f"speed bound broken at step {t}"
    if params.strategy is Strategy.ADAPTIVE:
        assert np.all((a_r >= params.a_R_min) & (a_r <= params.a_R_max)), (
            f"repulsion strength out of bounds at step {t}"
        )
    assert np.all((pos >= 0.0) & (pos <= arena.L)), f"agent outside arena at step {t}"
    # exploring agents hold no own entry; any held entry is unexpired
    assert np.all(~exploring | (mem_t == EMPTY_T)), f"flag/memory mismatch at step {t}"
    assert np.all((mem_t == EMPTY_T) | (mem_t + horizon >= t)), f"stale memory at step {t}"
