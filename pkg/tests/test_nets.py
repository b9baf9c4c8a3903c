import math

import numpy as np
import pytest

from horoslice import (
    BoundaryDirection,
    Horosphere,
    HyperbolicPlane,
    NetConnectivityError,
    ProductPoint,
    ProductSpace,
    UsageError,
)
from horoslice.experiments import default_scan_slice
from horoslice.nets import (
    SpanRegion,
    TubeRegion,
    build_net,
    get_backend,
    pack_h2_points,
    sample_region,
)

H2 = HyperbolicPlane()
INV_SQRT2 = 1.0 / math.sqrt(2.0)


def small_nodeset(n=300, seed=7):
    space = ProductSpace([H2, H2])
    d = BoundaryDirection(np.array([INV_SQRT2, INV_SQRT2]),
                          (math.inf, math.inf))
    horo = Horosphere(space, d, ProductPoint((1j, 1j)))
    slc = default_scan_slice(horo)
    axis = H2.line(1j, math.inf)
    regions = {0: TubeRegion(axis.perpendicular_at(0.0), 2.0, 0.8)}
    return slc, sample_region(slc, regions, n, seed)


def test_sampled_nodes_lie_on_horosphere():
    slc, nodes = small_nodeset()
    assert np.max(np.abs(nodes.membership_residuals())) < 1e-8
    for i in (0, nodes.n // 2, nodes.n - 1):
        p = nodes.node_point(i)
        assert abs(slc.horosphere.value(p)) < 1e-8


def test_sampling_is_deterministic():
    _, a = small_nodeset(seed=123)
    _, b = small_nodeset(seed=123)
    assert a.n == b.n
    assert np.array_equal(a.coords, b.coords)
    _, c = small_nodeset(seed=124)
    assert not np.array_equal(a.coords, c.coords)


def test_sample_region_requires_all_parts():
    slc, _ = small_nodeset()
    with pytest.raises(UsageError):
        sample_region(slc, {}, 100, 0)
    with pytest.raises(UsageError):
        sample_region(slc, {0: SpanRegion(0, 1), 5: SpanRegion(0, 1)}, 100, 0)


def test_backends_agree_on_edges():
    _, nodes = small_nodeset(n=250)
    eps = 2.5 * nodes.spacing
    args = (nodes.coords, nodes.layout.kinds, nodes.layout.offs,
            nodes.layout.widths, eps)
    i1, j1, w1 = get_backend("numpy").radius_edges(*args)
    i2, j2, w2 = get_backend("numba").radius_edges(*args)
    assert np.array_equal(i1, i2)
    assert np.array_equal(j1, j2)
    assert np.allclose(w1, w2, atol=1e-12)


def test_edge_weights_match_product_distance():
    slc, nodes = small_nodeset(n=200)
    eps = 2.5 * nodes.spacing
    net = build_net(nodes, eps, backend="numpy")
    rows, cols = net.graph.nonzero()
    take = slice(0, 40)
    for i, j in zip(rows[take], cols[take]):
        d = slc.space.dist(nodes.node_point(int(i)), nodes.node_point(int(j)))
        assert d == pytest.approx(net.graph[i, j], abs=1e-9)
        assert d <= eps + 1e-12


def test_net_distance_identities():
    _, nodes = small_nodeset(n=300)
    net = build_net(nodes, 2.5 * nodes.spacing)
    assert net.intrinsic(5, 5) == 0.0
    # directly connected nodes: intrinsic equals the edge weight
    rows, cols = net.graph.nonzero()
    i, j = int(rows[0]), int(cols[0])
    assert net.intrinsic(i, j) == pytest.approx(net.graph[i, j], abs=1e-12)
    # intrinsic dominates extrinsic
    a, b = 0, nodes.n - 1
    assert net.intrinsic(a, b) >= float(net.extrinsic(a, b)[0]) - 1e-9


def test_disconnected_net_fails_loudly():
    zs = np.concatenate([1j + 0.01 * np.arange(5),
                         100.0 + 1j + 0.01 * np.arange(5)])
    coords, layout = pack_h2_points(zs)
    with pytest.raises(NetConnectivityError):
        build_net((coords, layout), 0.05)


def test_unreachable_query_raises():
    from horoslice import NoPathError
    zs = np.concatenate([1j + 0.01 * np.arange(5),
                         100.0 + 1j + 0.01 * np.arange(5)])
    coords, layout = pack_h2_points(zs)
    net = build_net((coords, layout), 0.05, require_connected=False)
    assert net.intrinsic(0, 4) > 0.0
    with pytest.raises(NoPathError):
        net.intrinsic(0, 9)


def test_horocycle_net_approximates_arclength():
    # horocycle Im = 1: intrinsic distance from i to a + i is exactly a
    eps = 0.05
    delta = eps / 2.5
    xs = np.arange(0.0, 4.0 + delta, delta)
    coords, layout = pack_h2_points(xs + 1j)
    net = build_net((coords, layout), eps)
    a = xs[-1]
    measured = net.intrinsic(0, len(xs) - 1)
    assert measured == pytest.approx(a, rel=0.03)
