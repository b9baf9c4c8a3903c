import math

import numpy as np
import pytest

from horoslice import (
    BoundaryDirection,
    DomainError,
    Horosphere,
    HyperbolicPlane,
    ProductPoint,
    ProductSpace,
    UsageError,
)
from horoslice.experiments import (
    DistortionConfig,
    chart_circle_loop,
    cone_fill_loop,
    default_scan_slice,
    distortion_scan,
    fill_family,
    fit_exponent,
    horocycle_control,
)

H2 = HyperbolicPlane()
INV_SQRT2 = 1.0 / math.sqrt(2.0)
INV_SQRT3 = 1.0 / math.sqrt(3.0)


def make_horo(factors, theta, ends, base):
    return Horosphere(ProductSpace(factors),
                      BoundaryDirection(np.asarray(theta, float), tuple(ends)),
                      ProductPoint(tuple(base)))


def test_fit_exponent_exact_power_laws():
    slope, _ = fit_exponent([(s, s * s) for s in (1.0, 2.0, 3.0, 4.0)])
    assert abs(slope - 2.0) < 1e-12
    slope, _ = fit_exponent([(s, 5.0 * s) for s in (1.0, 2.0, 4.0)])
    assert abs(slope - 1.0) < 1e-12
    with pytest.raises(DomainError):
        fit_exponent([(1.0, 1.0), (2.0, 4.0)])
    with pytest.raises(DomainError):
        fit_exponent([(1.0, 1.0), (2.0, -4.0), (3.0, 9.0)])


def test_horocycle_control_closed_form_identity():
    res = horocycle_control(a_max=8.0, step=0.5)
    assert len(res.rows) == 16
    for row in res.rows:
        # intrinsic = 2 sinh(extrinsic / 2), exactly
        assert abs(row.intrinsic_exact
                   - 2.0 * math.sinh(row.extrinsic / 2.0)) <= 1e-9
    row2 = next(r for r in res.rows if abs(r.a - 2.0) < 1e-12)
    assert row2.extrinsic == pytest.approx(math.acosh(3.0), abs=1e-12)
    assert row2.extrinsic == pytest.approx(1.7627471740390861, abs=1e-12)


def test_horocycle_control_net_accuracy():
    res = horocycle_control(a_max=8.0, step=1.0, eps=0.05)
    for row in res.rows:
        assert row.intrinsic_net == pytest.approx(row.intrinsic_exact, rel=0.03)


def test_horocycle_control_small_a_ratio_tends_to_one():
    res = horocycle_control(a_max=0.1, step=0.025)
    first = res.rows[0]
    assert first.extrinsic / first.intrinsic_exact == pytest.approx(1.0, abs=1e-3)


def test_horocycle_control_usage_errors():
    with pytest.raises(UsageError):
        horocycle_control(0.0, 0.1)
    with pytest.raises(UsageError):
        horocycle_control(1.0, 0.1, eps=-1.0)


@pytest.fixture(scope="module")
def small_scan():
    horo = make_horo([H2, H2], [INV_SQRT2, INV_SQRT2],
                     [math.inf, math.inf], [1j, 1j])
    config = DistortionConfig(n_nodes=1500, n_pairs=48, ext_min=0.4,
                              ext_max=3.0, n_bins=12, tube_half_length=2.2,
                              tube_half_width=0.9)
    return distortion_scan(horo, seed=11, config=config)


def test_distortion_scan_ratios_bounded(small_scan):
    res = small_scan
    assert len(res.rows) >= 12
    for row in res.rows:
        # intrinsic >= extrinsic - 2 eps (net paths live in the ambient space)
        assert row.intrinsic >= row.extrinsic - 2.0 * res.eps
        # slice paths certify intrinsic <= sqrt(3) * chart <= sqrt(3) * ...,
        # with net overhead on top; 2.2 is a comfortable envelope
        assert row.ratio <= 2.2


def test_distortion_scan_slope_near_linear(small_scan):
    assert 0.8 <= small_scan.slope <= 1.3


def test_distortion_scan_determinism(small_scan):
    horo = make_horo([H2, H2], [INV_SQRT2, INV_SQRT2],
                     [math.inf, math.inf], [1j, 1j])
    config = DistortionConfig(n_nodes=1500, n_pairs=48, ext_min=0.4,
                              ext_max=3.0, n_bins=12, tube_half_length=2.2,
                              tube_half_width=0.9)
    again = distortion_scan(horo, seed=11, config=config)
    assert [(r.pair_id, r.extrinsic, r.intrinsic) for r in again.rows] == \
        [(r.pair_id, r.extrinsic, r.intrinsic) for r in small_scan.rows]


def test_distortion_scan_requires_q_at_least_2():
    horo = make_horo([H2, H2], [1.0, 0.0], [math.inf, None], [1j, 1j])
    with pytest.raises(UsageError):
        default_scan_slice(horo)


def three_factor_slice():
    horo = make_horo([H2, H2, H2], [INV_SQRT3] * 3,
                     [math.inf, math.inf, math.inf], [1j, 1j, 1j])
    return default_scan_slice(horo)


def test_chart_circle_loop_planes():
    slc = three_factor_slice()
    # k = 1, one free line: the flat full-line plane is the default
    loop = chart_circle_loop(slc, 2.0, n_boundary=64)
    assert len(loop) == 64
    for p in loop:
        assert abs(slc.horosphere.value(p)) < 1e-8


def test_cone_fill_degenerate_loop():
    slc = three_factor_slice()
    p = slc.chart_inverse(slc.random_chart_point(np.random.default_rng(0)))
    disc = cone_fill_loop(slc, [p] * 16, layers=4)
    assert disc.area == 0.0
    assert disc.boundary_length == 0.0
    assert disc.boundary == tuple([p] * 16)


def test_cone_fill_flat_family_quadratic():
    slc = three_factor_slice()
    res = fill_family(slc, radii=(1.0, 2.0, 4.0), n_boundary=128, layers=16)
    assert res.plane == "full-line"
    # exactly homogeneous family: the fit is quadratic to float precision
    assert res.slope == pytest.approx(2.0, abs=1e-9)
    # flat image of the chart disc: area = sqrt(3) pi R^2 for equal slopes
    for row, r in zip(res.rows, (1.0, 2.0, 4.0)):
        expected = math.sqrt(3.0) * math.pi * r * r
        assert row.area == pytest.approx(expected, rel=0.01)
        assert row.n_triangles == 128 * (2 * 16 - 1)


def test_cone_fill_mesh_on_horosphere():
    slc = three_factor_slice()
    loop = chart_circle_loop(slc, 2.0, n_boundary=64)
    disc = cone_fill_loop(slc, loop, layers=8)
    assert disc.max_membership_residual < 1e-6
    assert disc.boundary == tuple(loop)


def test_cone_fill_hyperbolic_plane_family_is_subquadratic():
    # two-factor slice: the only loop plane is the curved full factor, and
    # cone fills there grow like the boundary, not its square
    horo = make_horo([H2, H2], [INV_SQRT2, INV_SQRT2],
                     [math.inf, math.inf], [1j, 1j])
    slc = default_scan_slice(horo)
    res = fill_family(slc, radii=(1.0, 2.0, 4.0), n_boundary=128, layers=16,
                      plane="full")
    disc_area = lambda r: 2.0 * math.pi * (math.cosh(r) - 1.0)
    for row, r in zip(res.rows, (1.0, 2.0, 4.0)):
        assert disc_area(r) * 0.8 <= row.area <= 2.6 * disc_area(r)
    assert res.slope < 1.5


def test_fill_family_rejects_radius_and_plane_misuse():
    slc = three_factor_slice()
    with pytest.raises(UsageError):
        chart_circle_loop(slc, -1.0)
    with pytest.raises(UsageError):
        chart_circle_loop(slc, 1.0, plane="params")  # only one free parameter
