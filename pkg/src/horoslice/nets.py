"""Epsilon-net graphs on horosphere regions.

A region of a slice is sampled on a quasi-uniform jittered lattice in chart
coordinates, the dependent line parameter is solved from the horosphere
equation, and nodes are connected whenever their extrinsic product distance
is at most eps_connect.  Weighted shortest paths on the resulting graph
approximate the intrinsic (induced length) metric of the region.

The pairwise distance pass is the hot loop.  It runs on packed coordinate
matrices through one of two interchangeable kernels: a numba-jitted one
(default) and a pure-numpy one, selected by the HOROSLICE_BACKEND
environment variable ("numba" or "numpy").  `benchmarks/bench_pairwise.py`
compares the two.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from . import _pairwise_numpy
from .errors import NetConnectivityError, NoPathError, UsageError
from .hyperbolic import HyperbolicPlane
from .products import ProductPoint
from .slices import Slice

try:
    from . import _pairwise_numba
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a normal dependency
    _pairwise_numba = None
    _HAVE_NUMBA = False


def get_backend(name: str | None = None):
    """Kernel module chosen by argument or HOROSLICE_BACKEND (default numba)."""
    name = name or os.environ.get("HOROSLICE_BACKEND", "")
    name = name.strip().lower()
    if name not in ("", "numba", "numpy"):
        raise UsageError(f"unknown backend {name!r}; use 'numba' or 'numpy'")
    if name == "numpy" or (name == "" and not _HAVE_NUMBA):
        return _pairwise_numpy
    if not _HAVE_NUMBA:
        raise UsageError("numba backend requested but numba is unavailable")
    return _pairwise_numba


@dataclass(frozen=True)
class ColumnLayout:
    """Packed coordinate layout: per block a kind (0 Euclidean, 1 hyperbolic
    plane), a column offset, and a width."""
    kinds: np.ndarray
    offs: np.ndarray
    widths: np.ndarray

    @property
    def n_cols(self) -> int:
        return int(self.offs[-1] + self.widths[-1]) if self.kinds.size else 0


def _layout(blocks: list[tuple[int, int]]) -> ColumnLayout:
    kinds, offs, widths = [], [], []
    at = 0
    for kind, width in blocks:
        kinds.append(kind)
        offs.append(at)
        widths.append(width)
        at += width
    return ColumnLayout(np.array(kinds, np.int64), np.array(offs, np.int64),
                        np.array(widths, np.int64))


# -- region descriptions -------------------------------------------------

@dataclass(frozen=True)
class TubeRegion:
    """Fermi box around a geodesic core inside one hyperbolic full factor:
    core parameter in [-half_length, half_length], signed perpendicular
    distance in [-half_width, half_width]."""
    core: object
    half_length: float
    half_width: float

    @property
    def dims(self) -> int:
        return 2

    @property
    def measure(self) -> float:
        return 2.0 * self.half_length * 2.0 * math.sinh(self.half_width)


@dataclass(frozen=True)
class BoxRegion:
    """Axis box inside one Euclidean full factor."""
    lo: np.ndarray
    hi: np.ndarray

    @property
    def dims(self) -> int:
        return len(np.atleast_1d(self.lo))

    @property
    def measure(self) -> float:
        lo = np.atleast_1d(np.asarray(self.lo, float))
        hi = np.atleast_1d(np.asarray(self.hi, float))
        return float(np.prod(hi - lo))


@dataclass(frozen=True)
class SpanRegion:
    """Interval of one free line parameter."""
    lo: float
    hi: float

    @property
    def dims(self) -> int:
        return 1

    @property
    def measure(self) -> float:
        return float(self.hi - self.lo)


@dataclass
class NodeSet:
    """Sampled points of a slice region with packed coordinates."""
    slice: Slice
    factor_data: dict           # factor index -> complex array | (n,m) array | param array
    coords: np.ndarray
    layout: ColumnLayout
    spacing: float
    seed: int
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def node_point(self, i: int) -> ProductPoint:
        parts = []
        s = self.slice
        for fi in range(s.space.arity):
            if fi in s.full_idx:
                data = self.factor_data[fi]
                if isinstance(s.space.factors[fi], HyperbolicPlane):
                    parts.append(complex(data[i]))
                else:
                    parts.append(np.atleast_1d(data[i]))
            elif fi in s.line_idx:
                parts.append(s.line(fi).eval(float(self.factor_data[fi][i])))
            else:
                parts.append(s.base.parts[fi])
        return ProductPoint(tuple(parts))

    def membership_residuals(self) -> np.ndarray:
        """Horosphere value at every node, vectorized per factor."""
        s = self.slice
        total = np.zeros(self.n)
        for fi in s.full_idx:
            f = s.space.factors[fi]
            beta = f.busemann_many(s.center.ends[fi], s.base.parts[fi],
                                   self.factor_data[fi])
            total += float(s.theta[fi]) * np.asarray(beta)
        for fi in s.line_idx:
            total += float(s.theta[fi]) * self.factor_data[fi]
        return total


def _lattice_1d(lo: float, hi: float, delta: float, rng, jitter: float):
    n = max(2, int(math.ceil((hi - lo) / delta)))
    step = (hi - lo) / n
    xs = lo + (np.arange(n) + 0.5) * step
    if jitter > 0.0:
        xs = xs + rng.uniform(-jitter * delta, jitter * delta, n)
    return xs


def sample_region(slc: Slice, regions: dict, n: int, seed: int,
                  jitter: float = 0.15) -> NodeSet:
    """Quasi-uniform jittered lattice over a slice region.

    regions maps each full factor index to a TubeRegion/BoxRegion and each
    free line index to a SpanRegion.  The lattice spacing is chosen so the
    total node count comes out near n; identical seeds give identical
    nodes.
    """
    for fi in slc.full_idx:
        if fi not in regions:
            raise UsageError(f"region required for full factor {fi}")
    for fi in slc.free_idx:
        if fi not in regions:
            raise UsageError(f"span required for free line parameter {fi}")
    extra = set(regions) - set(slc.full_idx) - set(slc.free_idx)
    if extra:
        raise UsageError(f"regions given for non-chart factors {sorted(extra)}")
    if n < 4:
        raise UsageError("need at least 4 nodes")

    total_measure = 1.0
    total_dims = 0
    for r in regions.values():
        total_measure *= r.measure
        total_dims += r.dims
    delta = (total_measure / float(n)) ** (1.0 / total_dims)

    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    per_part: list[tuple[int, np.ndarray]] = []  # (factor index, local coords)
    for fi in sorted(regions):
        region = regions[fi]
        if isinstance(region, TubeRegion):
            n_rows = max(1, int(round(2.0 * region.half_width / delta)))
            dw = 2.0 * region.half_width / n_rows
            ss, ws = [], []
            for r in range(n_rows):
                w = -region.half_width + (r + 0.5) * dw
                arc_delta = delta / math.cosh(w)
                row_s = _lattice_1d(-region.half_length, region.half_length,
                                    arc_delta, rng, jitter)
                ss.append(row_s)
                ws.append(np.full(row_s.size, w)
                          + rng.uniform(-jitter * dw, jitter * dw, row_s.size))
            local = np.stack([np.concatenate(ss), np.concatenate(ws)], axis=1)
        elif isinstance(region, BoxRegion):
            lo = np.atleast_1d(np.asarray(region.lo, float))
            hi = np.atleast_1d(np.asarray(region.hi, float))
            axes = [_lattice_1d(a, b, delta, rng, 0.0) for a, b in zip(lo, hi)]
            grids = np.meshgrid(*axes, indexing="ij")
            local = np.stack([g.ravel() for g in grids], axis=1)
            local = local + rng.uniform(-jitter * delta, jitter * delta,
                                        local.shape)
        elif isinstance(region, SpanRegion):
            local = _lattice_1d(region.lo, region.hi, delta, rng, jitter)[:, None]
        else:
            raise UsageError(f"unsupported region type {type(region).__name__}")
        per_part.append((fi, local))

    # Cartesian product across parts
    sizes = [p.shape[0] for _, p in per_part]
    meshes = np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij")
    idx = [m.ravel() for m in meshes]
    n_nodes = idx[0].size if idx else 0

    factor_data: dict = {}
    blocks: list[tuple[int, int]] = []
    cols: list[np.ndarray] = []
    theta = slc.theta
    dep_acc = np.zeros(n_nodes)
    for part_k, (fi, local) in enumerate(per_part):
        take = local[idx[part_k]]
        f = slc.space.factors[fi] if fi in slc.full_idx else None
        if fi in slc.full_idx and isinstance(f, HyperbolicPlane):
            core = regions[fi].core
            zs = core.fermi_many(take[:, 0], take[:, 1])
            factor_data[fi] = zs
            blocks.append((1, 2))
            cols.append(np.stack([zs.real, zs.imag], axis=1))
            beta = f.busemann_many(slc.center.ends[fi], slc.base.parts[fi], zs)
            dep_acc += float(theta[fi]) * beta
        elif fi in slc.full_idx:
            factor_data[fi] = take
            blocks.append((0, take.shape[1]))
            cols.append(take)
            beta = f.busemann_many(slc.center.ends[fi], slc.base.parts[fi], take)
            dep_acc += float(theta[fi]) * np.asarray(beta)
        else:
            params = take[:, 0]
            factor_data[fi] = params
            blocks.append((0, 1))
            cols.append(params[:, None])
            dep_acc += float(theta[fi]) * params

    t_dep = -dep_acc / float(theta[slc.dep])
    factor_data[slc.dep] = t_dep
    blocks.append((0, 1))
    cols.append(t_dep[:, None])

    coords = np.ascontiguousarray(np.concatenate(cols, axis=1))
    return NodeSet(slc, factor_data, coords, _layout(blocks), delta, seed,
                   meta={"requested_n": n, "regions": {k: repr(v)
                                                       for k, v in regions.items()}})


# -- the net graph --------------------------------------------------------

@dataclass
class NetGraph:
    coords: np.ndarray
    layout: ColumnLayout
    eps: float
    graph: csr_matrix
    n_edges: int
    nodes: NodeSet | None = None

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def extrinsic(self, ii, jj, backend: str | None = None) -> np.ndarray:
        kern = get_backend(backend)
        return kern.pair_dists(self.coords, self.layout.kinds,
                               self.layout.offs, self.layout.widths,
                               np.atleast_1d(ii), np.atleast_1d(jj))

    def intrinsic_from(self, sources) -> np.ndarray:
        return dijkstra(self.graph, directed=False,
                        indices=np.atleast_1d(sources))

    def intrinsic(self, a: int, b: int) -> float:
        d = float(self.intrinsic_from(a)[0, b])
        if not math.isfinite(d):
            raise NoPathError(f"nodes {a} and {b} are not connected")
        return d


def build_net(source, eps: float, backend: str | None = None,
              require_connected: bool = True) -> NetGraph:
    """Connect all node pairs at extrinsic distance <= eps.

    `source` is a NodeSet or a (coords, layout) pair.  Raises
    NetConnectivityError when the graph is disconnected and connectivity is
    required.
    """
    if isinstance(source, NodeSet):
        coords, layout, nodes = source.coords, source.layout, source
    else:
        coords, layout = source
        nodes = None
    if eps <= 0.0:
        raise UsageError("eps_connect must be positive")
    kern = get_backend(backend)
    ii, jj, ww = kern.radius_edges(coords, layout.kinds, layout.offs,
                                   layout.widths, float(eps))
    n = coords.shape[0]
    graph = csr_matrix((np.concatenate([ww, ww]),
                        (np.concatenate([ii, jj]), np.concatenate([jj, ii]))),
                       shape=(n, n))
    net = NetGraph(coords, layout, float(eps), graph, int(ii.size), nodes)
    if require_connected:
        n_comp, labels = connected_components(graph, directed=False)
        if n_comp != 1:
            sizes = np.bincount(labels)
            raise NetConnectivityError(
                f"net with eps={eps:g} is disconnected: {n_comp} components, "
                f"sizes {sorted(sizes.tolist(), reverse=True)[:5]}...")
    return net


def pack_h2_points(zs: np.ndarray) -> tuple[np.ndarray, ColumnLayout]:
    """Packed coordinates for bare hyperbolic-plane points (single factor)."""
    zs = np.asarray(zs, complex)
    coords = np.ascontiguousarray(np.stack([zs.real, zs.imag], axis=1))
    return coords, _layout([(1, 2)])


def pack_euclidean_points(xs: np.ndarray) -> tuple[np.ndarray, ColumnLayout]:
    xs = np.atleast_2d(np.asarray(xs, float))
    coords = np.ascontiguousarray(xs)
    return coords, _layout([(0, xs.shape[1])])
