"""Elementary geometry, speed limiting, and RNG plumbing shared by all modules.

Positions and velocities are plain float64 numpy arrays: a single vector has
shape (2,), a batch has shape (N, 2). All functions accept both.
"""

from __future__ import annotations

import numpy as np

Vec2 = np.ndarray  # shape (2,), float64, finite components


class ConfigurationError(ValueError):
    """A parameter violates its documented bounds."""


class NumericHealthError(RuntimeError):
    """Non-finite values appeared where finite state is required."""


def vec(x: float, y: float) -> Vec2:
    """Build a finite 2-vector; rejects NaN/Inf at the door."""
    v = np.array([x, y], dtype=np.float64)
    if not np.isfinite(v).all():
        raise NumericHealthError(f"non-finite vector components: ({x}, {y})")
    return v


def check_finite(a: np.ndarray, what: str = "value") -> None:
    if not np.isfinite(a).all():
        raise NumericHealthError(f"non-finite {what}")


def dist(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance between two points."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_finite(a, "distance input")
    check_finite(b, "distance input")
    return float(np.hypot(a[..., 0] - b[..., 0], a[..., 1] - b[..., 1]))


# rescaling can overshoot v_max by a few ulps; tolerating them makes
# limit_speed an exact fixed point (bitwise idempotent)
_LIMIT_SLACK = 1.0 + 2.0**-48


def limit_speed(v: np.ndarray, v_max: float) -> np.ndarray:
    """Clamp speed: vectors longer than v_max are rescaled to magnitude v_max.

    Vectors at or under the limit (including zero) pass through unchanged;
    direction is always preserved. Works on a single (2,) vector or an (N, 2)
    batch.
    """
    if v_max <= 0:
        raise ConfigurationError(f"v_max must be positive, got {v_max}")
    v = np.asarray(v, dtype=np.float64)
    check_finite(v, "velocity")
    norm = np.sqrt(np.sum(v * v, axis=-1, keepdims=True))
    scale = np.ones_like(norm)
    over = norm > v_max * _LIMIT_SLACK
    np.divide(v_max, norm, out=scale, where=over)
    return v * scale


def rescale_speed(v: np.ndarray, v_max: float) -> np.ndarray:
    """Unconditional rescale to magnitude v_max (zero vectors pass through).

    A/B variant of limit_speed kept behind SimConfig.limit_mode="rescale".
    """
    if v_max <= 0:
        raise ConfigurationError(f"v_max must be positive, got {v_max}")
    v = np.asarray(v, dtype=np.float64)
    check_finite(v, "velocity")
    norm = np.sqrt(np.sum(v * v, axis=-1, keepdims=True))
    scale = np.ones_like(norm)
    np.divide(v_max, norm, out=scale, where=norm > 0)
    return v * scale


def make_rng(seed: int) -> np.random.Generator:
    """One PCG64 generator per run; same seed, same draw sequence.

    All stochastic draws of a run consume from this single stream in the
    documented order: initial agent positions (row-major), target position,
    first waypoint, then per step: waypoint redraws (x, y) if the target
    arrived, followed by one length-N attraction draw (ascending agent id).
    """
    if not 0 <= int(seed) < 2**64:
        raise ConfigurationError(f"seed must fit in 64 unsigned bits, got {seed}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def powi(x, n: int):
    """x**n for integer n >= 1 by binary exponentiation.

    Multiplication is correctly rounded, so scalar and array callers get
    bit-identical results for the same multiply order; library pow() does
    not guarantee that.
    """
    if n < 1:
        raise ConfigurationError(f"powi exponent must be >= 1, got {n}")
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer; the documented hash behind per-cell seed derivation."""
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return (z ^ (z >> 31)) & 0xFFFFFFFFFFFFFFFF
