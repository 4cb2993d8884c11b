import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarm_lab.core import ConfigurationError, dist, make_rng, vec
from swarm_lab.world import (
    Arena,
    TargetState,
    apply_boundary,
    apply_boundary_reflect,
    coverage,
    draw_point,
    target_step,
)


def make_target(pos, waypoint, v_o_max=0.15, r=1.0):
    return TargetState(pos=vec(*pos), waypoint=vec(*waypoint), v_o_max=v_o_max, r=r)


def test_straight_line_motion():
    t = target_step(make_target((0, 0), (1, 0)), Arena(10), make_rng(0))
    assert np.allclose(t.pos, [0.15, 0.0])
    assert np.allclose(t.waypoint, [1.0, 0.0])


def test_arrival_redraws_waypoint_and_keeps_moving():
    rng = make_rng(42)
    t = target_step(make_target((0, 0), (0.1, 0)), Arena(10), rng)
    # waypoint redrawn uniformly; consumed exactly the two next draws
    expected_wp = make_rng(42).random(2) * 10
    assert np.allclose(t.waypoint, expected_wp)
    # position advanced from the old waypoint toward the new one with the
    # leftover budget 0.15 - 0.1 = 0.05
    gap = dist(vec(0.1, 0.0), t.waypoint)
    assert dist(t.pos, t.waypoint) == pytest.approx(max(0.0, gap - 0.05), abs=1e-12)


def test_trajectory_replay_is_deterministic():
    arena = Arena(25)

    def trajectory(seed, steps=10_000):
        rng = make_rng(seed)
        t = TargetState(pos=draw_point(arena, rng), waypoint=draw_point(arena, rng))
        out = np.empty((steps, 2))
        for i in range(steps):
            t = target_step(t, arena, rng)
            out[i] = t.pos
        return out

    a, b = trajectory(99), trajectory(99)
    assert np.array_equal(a, b)
    assert arena.contains(a.min(axis=0)) and arena.contains(a.max(axis=0))


def test_target_speed_never_exceeds_max():
    arena = Arena(5)
    rng = make_rng(7)
    t = TargetState(pos=draw_point(arena, rng), waypoint=draw_point(arena, rng))
    for _ in range(5000):
        prev = t.pos
        t = target_step(t, arena, rng)
        assert dist(prev, t.pos) <= t.v_o_max + 1e-12


def test_coverage_examples():
    target = make_target((0, 0), (1, 1))
    assert coverage(np.array([[0.99, 0.0]]), target) == 1
    assert coverage(np.array([[1.5, 0.0], [0.0, -3.0]]), target) == 0
    assert coverage(np.array([[1.0, 0.0]]), target) == 1  # boundary-inclusive


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_coverage_monotone_in_radius(seed):
    rng = np.random.default_rng(seed)
    pos = rng.random((8, 2)) * 10
    tpos = rng.random(2) * 10
    small = coverage(pos, make_target(tpos, tpos, r=0.5))
    large = coverage(pos, make_target(tpos, tpos, r=2.0))
    assert large >= small


def test_apply_boundary_examples():
    arena = Arena(10)
    assert np.allclose(apply_boundary(vec(-0.2, 5.0), arena), [0.0, 5.0])
    assert np.allclose(apply_boundary(vec(3.0, 3.0), arena), [3.0, 3.0])
    assert np.allclose(apply_boundary(vec(10.4, 10.4), arena), [10.0, 10.0])


def test_apply_boundary_batched():
    arena = Arena(2)
    out = apply_boundary(np.array([[-1.0, 1.0], [3.0, 0.5]]), arena)
    assert np.allclose(out, [[0.0, 1.0], [2.0, 0.5]])


def test_reflect_boundary_folds_and_flips():
    arena = Arena(10)
    pos, velocity = apply_boundary_reflect(
        np.array([[-0.2, 5.0], [10.4, 3.0], [4.0, 4.0]]),
        np.array([[-0.1, 0.0], [0.1, 0.05], [0.02, 0.02]]),
        arena,
    )
    assert np.allclose(pos, [[0.2, 5.0], [9.6, 3.0], [4.0, 4.0]])
    assert np.allclose(velocity, [[0.1, 0.0], [-0.1, 0.05], [0.02, 0.02]])


def test_arena_rejects_bad_side():
    with pytest.raises(ConfigurationError):
        Arena(0.0)
    with pytest.raises(ConfigurationError):
        Arena(float("nan"))
