import math

import numpy as np
import pytest

from horoslice import (
    Base,
    BoundaryDirection,
    ChartPoint,
    EuclideanSpace,
    Full,
    Horosphere,
    HyperbolicPlane,
    InvalidSliceError,
    LineFactor,
    NotInSliceError,
    ProductPoint,
    ProductSpace,
    RegularTree,
    SliceSpec,
    TreeEnd,
    TreePoint,
    make_slice,
    project_along_horospheres,
)

H2 = HyperbolicPlane()
R1 = EuclideanSpace(1)
T3 = RegularTree(3)
INV_SQRT2 = 1.0 / math.sqrt(2.0)


def make_horosphere(factors, theta, ends, base):
    space = ProductSpace(factors)
    direction = BoundaryDirection(np.asarray(theta, float), tuple(ends))
    return Horosphere(space, direction, ProductPoint(tuple(base)))


def slice_with_shapes(horo, shapes, dependent=None):
    """shapes: per factor, 'F' (full), 'L' (line through o_i), 'B' (base)."""
    entries = []
    for i, s in enumerate(shapes):
        if s == "F":
            entries.append(Full())
        elif s == "B":
            entries.append(Base())
        else:
            f = horo.space.factors[i]
            entries.append(LineFactor(f.line(horo.base.parts[i],
                                             horo.center.ends[i])))
    return make_slice(horo, SliceSpec(tuple(entries), dependent))


@pytest.fixture
def horo_h2h2():
    return make_horosphere([H2, H2], [INV_SQRT2, INV_SQRT2],
                           [math.inf, math.inf], [1j, 1j])


def test_horosphere_value_examples(horo_h2h2):
    h = horo_h2h2
    assert h.value(h.base) == 0.0
    assert h.value(ProductPoint((2j, 0.5j))) == pytest.approx(0.0, abs=1e-12)
    assert h.contains(ProductPoint((2j, 0.5j)))
    deep = h.space.ray_point(h.base, h.center, 1.0)
    assert h.value(deep) == pytest.approx(1.0, abs=1e-12)


def test_projection_along_horospheres_euclidean():
    r2 = EuclideanSpace(2)
    axis = r2.line((0.0, 0.0), (1.0, 0.0))
    p = project_along_horospheres(axis, (3.0, 7.0))
    assert np.allclose(p, [3.0, 0.0])


def test_projection_along_horospheres_hyperbolic():
    axis = H2.line(1j, math.inf)
    p = project_along_horospheres(axis, 1 + 1j)
    assert p == pytest.approx(1j, abs=1e-12)


def test_projection_fixes_points_and_lands_on_horosphere(rng):
    space = ProductSpace([H2, H2])
    for _ in range(10):
        d = space.random_direction(rng)
        x = space.random_point(rng)
        line = space.line(space.random_point(rng), d)
        p = project_along_horospheres(line, x)
        # p is on the line and on the horosphere through x
        assert abs(space.busemann(d, x, p)) < 1e-9
        q = line.eval(1.7)
        assert space.point_eq(project_along_horospheres(line, q), q, tol=1e-9)


def test_make_slice_rejects_full_on_all_active(horo_h2h2):
    with pytest.raises(InvalidSliceError):
        slice_with_shapes(horo_h2h2, "FF")


def test_make_slice_rejects_non_base_on_inactive():
    h = make_horosphere([H2, H2, R1], [0.6, 0.8, 0.0],
                        [math.inf, math.inf, None], [1j, 1j, 0.0])
    with pytest.raises(InvalidSliceError):
        slice_with_shapes(h, "LLF")
    s = slice_with_shapes(h, "LLB")
    assert s.k == 0


def test_make_slice_rejects_wrong_line_endpoint(horo_h2h2):
    bad = H2.line(1j, 0.0)  # ends at 0, not at inf
    with pytest.raises(InvalidSliceError):
        make_slice(horo_h2h2, SliceSpec((LineFactor(bad), Full())))


def test_zero_slice_valid(horo_h2h2):
    s = slice_with_shapes(horo_h2h2, "LL")
    assert s.k == 0
    assert s.dep == 0  # argmax of equal slopes, ties to the lowest index
    assert s.free_idx == (1,)


def test_line_normalization_shifts_parameter(horo_h2h2):
    # offer a line based at height 2 instead of the basepoint height
    line = H2.line(2j, math.inf)
    s = make_slice(horo_h2h2, SliceSpec((LineFactor(line), Full()), dependent=0))
    norm = s.line(0)
    b = H2.busemann(math.inf, 1j, norm.eval(0.0))
    assert b == pytest.approx(0.0, abs=1e-9)


def test_chart_forward_example(horo_h2h2):
    # with the second factor dependent, the chart keeps the first parameter
    s = slice_with_shapes(horo_h2h2, "LL", dependent=1)
    x = ProductPoint((s.line(0).eval(1.0), s.line(1).eval(-1.0)))
    c = s.chart_forward(x)
    assert c.fulls == ()
    assert np.allclose(c.params, [1.0])


def test_chart_forward_rejects_off_slice(horo_h2h2):
    s = slice_with_shapes(horo_h2h2, "LL")
    with pytest.raises(NotInSliceError):
        s.chart_forward(ProductPoint((2j, 2j)))  # off the horosphere
    with pytest.raises(NotInSliceError):
        # on the horosphere, off the line (shifted horizontally)
        s.chart_forward(ProductPoint((1 + 2j, 0.5j)))


def test_chart_inverse_dependent_solve(horo_h2h2):
    s = slice_with_shapes(horo_h2h2, "LL", dependent=1)
    x = s.chart_inverse(ChartPoint((), np.array([1.0])))
    assert H2.dist(x.parts[1], s.line(1).eval(-1.0)) < 1e-9
    assert abs(horo_h2h2.value(x)) < 1e-8
    x0 = s.chart_inverse(ChartPoint((), np.array([0.0])))
    assert H2.dist(x0.parts[0], s.line(0).eval(0.0)) < 1e-12
    assert H2.dist(x0.parts[1], s.line(1).eval(0.0)) < 1e-12


def test_chart_inverse_three_factor_example():
    h = make_horosphere([H2, H2, H2], [0.6, 0.48, 0.64],
                        [math.inf, math.inf, math.inf], [1j, 1j, 1j])
    s = slice_with_shapes(h, "LLL")
    assert s.dep == 2  # argmax slope
    x = s.chart_inverse(ChartPoint((), np.array([1.0, 1.0])))
    t_dep = s.line(2).param_of(x.parts[2])
    assert t_dep == pytest.approx(-(0.6 + 0.48) / 0.64, abs=1e-9)
    assert t_dep == pytest.approx(-1.6875, abs=1e-9)
    assert abs(h.value(x)) < 1e-8


def slice_families(rng):
    """Slice families across k, regular/singular centers, permuted indices,
    and factor kinds (including a tree factor)."""
    fams = []
    h_reg = make_horosphere([H2, H2], [INV_SQRT2, INV_SQRT2],
                            [math.inf, math.inf], [1j, 1j])
    fams.append(slice_with_shapes(h_reg, "LL"))
    fams.append(slice_with_shapes(h_reg, "FL"))
    fams.append(slice_with_shapes(h_reg, "LF"))  # permuted: full factor last
    h_skew = make_horosphere([H2, H2], [0.6, 0.8], [math.inf, 0.0], [1j, 2j])
    fams.append(slice_with_shapes(h_skew, "FL"))
    fams.append(slice_with_shapes(h_skew, "LL"))
    h_sing = make_horosphere([H2, H2, H2], [0.6, 0.0, 0.8],
                             [math.inf, None, -1.0], [1j, 1 + 1j, 1j])
    fams.append(slice_with_shapes(h_sing, "LBL"))   # base in the middle
    fams.append(slice_with_shapes(h_sing, "FBL"))
    h_mix = make_horosphere([H2, R1, T3],
                            [0.6, 0.64, 0.48],
                            [math.inf, np.array([1.0]), TreeEnd("", "01")],
                            [1j, 0.0, TreePoint("")])
    fams.append(slice_with_shapes(h_mix, "LLL"))
    fams.append(slice_with_shapes(h_mix, "FLL"))
    fams.append(slice_with_shapes(h_mix, "LLF"))    # full tree factor
    h_r3 = make_horosphere([H2, H2, H2], [1 / math.sqrt(3)] * 3,
                           [math.inf, 0.5, math.inf], [1j, 1j, 1j])
    fams.append(slice_with_shapes(h_r3, "FLL"))
    fams.append(slice_with_shapes(h_r3, "LLL"))
    return fams


def test_chart_roundtrip_across_families(rng):
    for s in slice_families(rng):
        for _ in range(40):
            c = s.random_chart_point(rng)
            x = s.chart_inverse(c)
            assert abs(s.horosphere.value(x)) < 1e-8
            c2 = s.chart_forward(x)
            assert np.allclose(c2.params, c.params, atol=1e-9)
            for j, i in enumerate(s.full_idx):
                assert s.space.factors[i].dist(c2.fulls[j], c.fulls[j]) < 1e-9
            x2 = s.chart_inverse(c2)
            assert s.space.dist(x, x2) < 1e-9


def test_chart_lower_bound(rng):
    for s in slice_families(rng):
        for _ in range(20):
            cx = s.random_chart_point(rng)
            cy = s.random_chart_point(rng)
            x = s.chart_inverse(cx)
            y = s.chart_inverse(cy)
            assert s.chart_dist(cx, cy) <= s.space.dist(x, y) + 1e-9


def test_bilipschitz_constants():
    h = make_horosphere([H2, H2], [INV_SQRT2, INV_SQRT2],
                        [math.inf, math.inf], [1j, 1j])
    s = slice_with_shapes(h, "LL")
    lo, up = s.bilipschitz_constants()
    assert lo == 1.0
    assert up == pytest.approx(math.sqrt(3.0), abs=1e-12)

    h = make_horosphere([H2, H2], [0.6, 0.8], [math.inf, math.inf], [1j, 1j])
    s = slice_with_shapes(h, "FL")
    assert s.bilipschitz_constants()[1] == pytest.approx(
        math.sqrt(1.0 + 1.0 / 0.36), abs=1e-9)
    assert s.bilipschitz_constants()[1] == pytest.approx(1.9436506316151, abs=1e-9)

    r = 4
    h = make_horosphere([H2] * r, [1.0 / math.sqrt(r)] * r,
                        [math.inf] * r, [1j] * r)
    s = slice_with_shapes(h, "L" * r)
    assert s.bilipschitz_constants()[1] == pytest.approx(
        math.sqrt(1.0 + r), abs=1e-12)


def test_slice_path_flat_example(horo_h2h2):
    s = slice_with_shapes(horo_h2h2, "LL", dependent=1)
    x = s.chart_inverse(ChartPoint((), np.array([0.0])))
    y = s.chart_inverse(ChartPoint((), np.array([1.0])))
    path = s.path(x, y, samples=257)
    assert path.chart_dist == pytest.approx(1.0, abs=1e-12)
    # the compensation parameter solves theta1*t + theta2*gamma = 0
    assert np.allclose(path.dependent_params, -path.ts, atol=1e-9)
    assert path.length <= math.sqrt(3.0) * 1.0 + 1e-6
    assert np.max(np.abs(path.membership_residuals())) < 1e-8
    first, last = path.points[0], path.points[-1]
    assert s.space.point_eq(first, x, tol=1e-9)
    assert s.space.point_eq(last, y, tol=1e-9)


def test_slice_path_degenerate(horo_h2h2):
    s = slice_with_shapes(horo_h2h2, "LL")
    x = s.chart_inverse(ChartPoint((), np.array([0.7])))
    path = s.path(x, x)
    assert path.length == 0.0
    assert len(path.points) == 1


def test_slice_path_bound_and_membership(rng):
    for s in slice_families(rng):
        for _ in range(6):
            cx = s.random_chart_point(rng)
            cy = s.random_chart_point(rng)
            x = s.chart_inverse(cx)
            y = s.chart_inverse(cy)
            path = s.path(x, y, samples=256)
            assert path.length <= path.bound + 1e-6
            assert path.length <= s.bilipschitz_constants()[1] * path.chart_dist + 1e-6
            assert np.max(np.abs(path.membership_residuals())) < 1e-8
            assert s.space.point_eq(path.points[0], x, tol=1e-8)
            assert s.space.point_eq(path.points[-1], y, tol=1e-8)


def test_gamma_lipschitz_estimate(rng):
    for s in slice_families(rng)[:6]:
        theta_dep = float(s.theta[s.dep])
        for _ in range(4):
            x = s.chart_inverse(s.random_chart_point(rng))
            y = s.chart_inverse(s.random_chart_point(rng))
            path = s.path(x, y, samples=256)
            dgamma = np.abs(np.diff(path.dependent_params))
            dt = np.diff(path.ts)
            assert np.all(dgamma <= dt / theta_dep + 1e-9)


def test_path_extrinsic_vs_chart(rng):
    # the extrinsic distance between endpoints never exceeds the path length
    for s in slice_families(rng)[:4]:
        for _ in range(4):
            x = s.chart_inverse(s.random_chart_point(rng))
            y = s.chart_inverse(s.random_chart_point(rng))
            path = s.path(x, y, samples=512)
            assert s.space.dist(x, y) <= path.length + 1e-6
