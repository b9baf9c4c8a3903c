import numpy as np
import pytest

from horoslice import DegenerateSegmentError, DomainError, EuclideanSpace, busemann_limit

R1 = EuclideanSpace(1)
R2 = EuclideanSpace(2)


def test_distance_pythagoras():
    assert R2.dist((0.0, 0.0), (3.0, 4.0)) == 5.0


def test_segment_eval():
    seg = R2.geodesic((0.0, 0.0), (3.0, 4.0))
    assert seg.length == 5.0
    assert np.allclose(seg.eval(2.5), [1.5, 2.0])


def test_degenerate_segment():
    with pytest.raises(DegenerateSegmentError):
        R2.geodesic((1.0, 2.0), (1.0, 2.0))


def test_ray_on_line_toward_minus():
    ray = R1.ray(5.0, [-1.0])
    assert np.allclose(ray.eval(3.0), [2.0])


def test_line_backward_extension():
    line = R1.line(5.0, [-1.0])
    assert np.allclose(line.eval(-2.0), [7.0])
    assert np.allclose(line.forward_end, [-1.0])
    assert np.allclose(line.backward_end, [1.0])


def test_boundary_validation():
    with pytest.raises(DomainError):
        R2.check_end((1.0, 1.0))
    R2.check_end((1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)))


def test_busemann_on_ray_and_sign():
    v = np.array([1.0])
    assert R1.busemann(v, 0.0, 7.0) == pytest.approx(7.0, abs=1e-12)
    assert R1.busemann(v, 0.0, -2.0) == pytest.approx(-2.0, abs=1e-12)


def test_busemann_closed_vs_limit(rng):
    for space in (R1, R2):
        for _ in range(40):
            x = space.random_point(rng)
            y = space.random_point(rng)
            v = space.random_end(rng)
            closed = space.busemann(v, x, y)
            assert abs(closed - busemann_limit(space, v, x, y)) < 1e-9


def test_busemann_cocycle_and_bound(rng):
    for _ in range(60):
        x, y, z = (R2.random_point(rng) for _ in range(3))
        v = R2.random_end(rng)
        assert abs(R2.busemann(v, x, z) - R2.busemann(v, x, y)
                   - R2.busemann(v, y, z)) < 1e-12
        assert abs(R2.busemann(v, x, y)) <= R2.dist(x, y) + 1e-12


def test_unit_speed_and_projection(rng):
    for _ in range(20):
        x = R2.random_point(rng)
        v = R2.random_end(rng)
        line = R2.line(x, v)
        t, u = rng.uniform(-5, 5, 2)
        assert R2.dist(line.eval(t), line.eval(u)) == pytest.approx(
            abs(t - u), abs=1e-12)
        p = R2.random_point(rng)
        tp = line.param_of(p)
        sweep = min(R2.dist(p, line.eval(s)) for s in np.linspace(-20, 20, 2001))
        assert R2.dist(p, line.eval(tp)) <= sweep + 1e-6


def test_cat0_midpoint_equality_case(rng):
    # flat space: the comparison inequality holds with equality
    for _ in range(20):
        x, y, z = (R2.random_point(rng) for _ in range(3))
        if np.allclose(x, y):
            continue
        seg = R2.geodesic(x, y)
        m = seg.eval(seg.length / 2.0)
        lhs = R2.dist(m, z) ** 2
        rhs = 0.5 * R2.dist(x, z) ** 2 + 0.5 * R2.dist(y, z) ** 2 \
            - 0.25 * R2.dist(x, y) ** 2
        assert lhs == pytest.approx(rhs, abs=1e-9)
