"""Desk-scale experiments on horosphere geometry.

Three measurements, each backed by the net/slice machinery:

  * horocycle control: in a single hyperbolic plane, the intrinsic
    horocycle distance grows like 2 sinh(extrinsic/2) - the exponential
    distortion that products of two or more factors are measured against;

  * distortion scan: an epsilon-net over a tube-shaped slice region of a
    product horosphere, intrinsic (shortest-path) vs extrinsic distance for
    seeded pairs binned across a distance range, plus a log-log slope fit
    (linear undistortion predicts slope near 1);

  * cone fill: loops in a slice are filled by coning to the chart image of
    their first vertex along chart geodesics, meshing in concentric rings,
    and mapping back through the chart; the reported area adds up Euclidean
    comparison-triangle areas of the extrinsic side lengths, which the
    CAT(0) inequality makes an upper bound on the true filling area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError
from .euclidean import EuclideanSpace
from .hyperbolic import HyperbolicPlane
from .nets import (
    BoxRegion,
    SpanRegion,
    TubeRegion,
    build_net,
    get_backend,
    pack_h2_points,
    sample_region,
)
from .products import ProductPoint
from .slices import (
    Base,
    ChartPoint,
    Full,
    Horosphere,
    LineFactor,
    Slice,
    SliceSpec,
    make_slice,
)


def fit_exponent(samples) -> tuple[float, float]:
    """Ordinary least squares of log(value) against log(size).

    Returns (slope, intercept); every sample must be strictly positive.
    """
    samples = list(samples)
    if len(samples) < 3:
        raise DomainError("need at least 3 samples for an exponent fit")
    sizes = np.array([s for s, _ in samples], dtype=float)
    values = np.array([v for _, v in samples], dtype=float)
    if np.any(sizes <= 0.0) or np.any(values <= 0.0):
        raise DomainError("exponent fit needs positive sizes and values")
    x = np.log(sizes)
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)


# -- horocycle control -----------------------------------------------------


@dataclass(frozen=True)
class ControlRow:
    a: float
    extrinsic: float
    intrinsic_exact: float
    intrinsic_net: float


@dataclass(frozen=True)
class ControlResult:
    rows: tuple
    eps: float
    n_nodes: int

    def csv_rows(self):
        for r in self.rows:
            yield (r.a, r.extrinsic, r.intrinsic_exact, r.intrinsic_net)


def horocycle_control(a_max: float, step: float, eps: float = 0.05) -> ControlResult:
    """Intrinsic vs extrinsic distance along the horocycle Im = 1 in one
    hyperbolic plane, from i to a + i.

    The intrinsic (horocyclic) distance is exactly a, the extrinsic one
    acosh(1 + a^2/2), so intrinsic = 2 sinh(extrinsic / 2): exponential
    distortion.  The net column re-measures the intrinsic value through an
    epsilon-net to validate the harness itself.
    """
    if a_max <= 0.0 or step <= 0.0:
        raise UsageError("a_max and step must be positive")
    if eps <= 0.0:
        raise UsageError("eps must be positive")
    h2 = HyperbolicPlane()
    n_steps = int(math.floor(a_max / step + 1e-9))
    if n_steps < 1:
        raise UsageError("a_max must be at least one step")
    # grid spacing divides the step so every queried point is a node
    delta = step / math.ceil(step / (eps / 2.5))
    per_step = int(round(step / delta))
    n_nodes = n_steps * per_step + 1
    xs = np.arange(n_nodes) * delta
    zs = xs + 1j
    coords, layout = pack_h2_points(zs)
    net = build_net((coords, layout), eps)
    intrinsic_net = net.intrinsic_from(0)[0]
    rows = []
    for k in range(1, n_steps + 1):
        a = k * step
        node = k * per_step
        rows.append(ControlRow(a, h2.dist(1j, a + 1j), a,
                               float(intrinsic_net[node])))
    return ControlResult(tuple(rows), eps, n_nodes)


# -- distortion scan --------------------------------------------------------


@dataclass(frozen=True)
class DistortionConfig:
    n_nodes: int = 20000
    n_pairs: int = 160
    ext_min: float = 1.0
    ext_max: float = 12.0
    n_bins: int = 24
    eps: float | None = None          # default: 2.5 * lattice spacing
    tube_half_length: float | None = None
    tube_half_width: float = 1.2
    backend: str | None = None


@dataclass(frozen=True)
class DistortionRow:
    pair_id: int
    extrinsic: float
    intrinsic: float

    @property
    def ratio(self) -> float:
        return self.intrinsic / self.extrinsic


@dataclass(frozen=True)
class DistortionResult:
    rows: tuple
    slope: float
    intercept: float
    n_nodes: int
    n_edges: int
    eps: float
    spacing: float

    def csv_rows(self):
        for r in self.rows:
            yield (r.pair_id, r.extrinsic, r.intrinsic, r.ratio)


def default_scan_slice(horosphere: Horosphere) -> Slice:
    """Maximal slice used by the distortion scan: the first active factor
    full, the remaining active factors lines, inactive factors at the base."""
    active = horosphere.center.active
    if len(active) < 2:
        raise UsageError("q must be at least 2 for a distortion scan")
    entries = []
    for i in range(horosphere.space.arity):
        if i not in active:
            entries.append(Base())
        elif i == active[0]:
            entries.append(Full())
        else:
            f = horosphere.space.factors[i]
            entries.append(LineFactor(f.line(horosphere.base.parts[i],
                                             horosphere.center.ends[i])))
    return make_slice(horosphere, SliceSpec(tuple(entries)))


def scan_regions(slc: Slice, config: DistortionConfig) -> dict:
    """Sampling region for the scan: a Fermi tube (or box) in the full
    factor plus spans for any remaining free line parameters."""
    half_length = config.tube_half_length
    if half_length is None:
        half_length = 0.62 * config.ext_max
    regions: dict = {}
    for fi in slc.full_idx:
        f = slc.space.factors[fi]
        if isinstance(f, HyperbolicPlane):
            axis = f.line(slc.base.parts[fi], slc.center.ends[fi])
            regions[fi] = TubeRegion(axis.perpendicular_at(0.0), half_length,
                                     config.tube_half_width)
        elif isinstance(f, EuclideanSpace):
            lo = np.full(f.dim, -half_length)
            regions[fi] = BoxRegion(lo, -lo)
        else:
            raise UsageError(
                f"net sampling is not supported on factor {f.describe()}")
    for fi in slc.free_idx:
        regions[fi] = SpanRegion(-half_length, half_length)
    return regions


def distortion_scan(horosphere: Horosphere, seed: int,
                    config: DistortionConfig = DistortionConfig()) -> DistortionResult:
    slc = default_scan_slice(horosphere)
    regions = scan_regions(slc, config)
    nodes = sample_region(slc, regions, config.n_nodes, seed)
    eps = config.eps if config.eps is not None else 2.5 * nodes.spacing
    net = build_net(nodes, eps, backend=config.backend)

    # candidate pairs, binned by extrinsic distance on a log grid
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed) + 1))
    n_cand = 64 * config.n_pairs
    ii = rng.integers(0, nodes.n, n_cand)
    jj = rng.integers(0, nodes.n, n_cand)
    keep = ii != jj
    ii, jj = ii[keep], jj[keep]
    ext = net.extrinsic(ii, jj, backend=config.backend)
    edges = np.geomspace(config.ext_min, config.ext_max, config.n_bins + 1)
    per_bin = max(1, -(-config.n_pairs // config.n_bins))
    chosen: list[tuple[int, int, float]] = []
    for b in range(config.n_bins):
        inbin = np.nonzero((ext >= edges[b]) & (ext <= edges[b + 1]))[0]
        for k in inbin[:per_bin]:
            chosen.append((int(ii[k]), int(jj[k]), float(ext[k])))
    if len(chosen) < 3:
        raise UsageError("too few candidate pairs in the requested range; "
                         "enlarge the region or the node budget")

    sources = sorted({a for a, _, _ in chosen})
    source_pos = {s: k for k, s in enumerate(sources)}
    dist_table = net.intrinsic_from(sources)
    rows = []
    for pid, (a, b, e) in enumerate(chosen):
        intr = float(dist_table[source_pos[a], b])
        rows.append(DistortionRow(pid, e, intr))
    slope, intercept = fit_exponent([(r.extrinsic, r.intrinsic) for r in rows])
    return DistortionResult(tuple(rows), slope, intercept, nodes.n,
                            net.n_edges, eps, nodes.spacing)


# -- cone fillings -----------------------------------------------------------


@dataclass(frozen=True)
class FilledDisc:
    boundary: tuple                 # the input loop vertices, verbatim
    mesh_coords: np.ndarray         # packed coordinates of all mesh vertices
    triangles: np.ndarray           # (m, 3) vertex indices
    area: float
    boundary_length: float
    max_membership_residual: float

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])


def _heron_areas(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    sides = np.sort(np.stack([a, b, c], axis=1), axis=1)[:, ::-1]
    a, b, c = sides[:, 0], sides[:, 1], sides[:, 2]
    expr = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * np.sqrt(np.maximum(expr, 0.0))


def cone_fill_loop(slc: Slice, loop, layers: int = 32,
                   backend: str | None = None) -> FilledDisc:
    """Fill a loop lying in a slice by coning it to the chart image of its
    first vertex; see the module docstring for the measurement conventions.
    """
    loop = [slc.space.check_point(p) for p in loop]
    if len(loop) < 1:
        raise UsageError("loop needs at least one vertex")
    if layers < 1:
        raise UsageError("need at least one mesh layer")
    charts = [slc.chart_forward(p) for p in loop]
    n_b = len(loop)
    m = layers
    n_vertices = 1 + m * n_b
    fractions = np.arange(1, m + 1) / float(m)

    # mesh coordinates per factor: index 0 is the apex, then m rings of n_b
    theta = slc.theta
    apex = charts[0]
    dep_acc = np.zeros(n_vertices)
    blocks: list[tuple[int, int]] = []
    cols: list[np.ndarray] = []
    for j, fi in enumerate(slc.full_idx):
        f = slc.space.factors[fi]
        if isinstance(f, HyperbolicPlane):
            ring = np.empty((m, n_b), dtype=complex)
            for k, cp in enumerate(charts):
                if f.dist(apex.fulls[j], cp.fulls[j]) == 0.0:
                    ring[:, k] = cp.fulls[j]
                else:
                    seg = f.geodesic(apex.fulls[j], cp.fulls[j])
                    ring[:, k] = seg.eval_many(fractions * seg.length)
            pts = np.concatenate([[complex(apex.fulls[j])], ring.ravel()])
            cols.append(np.stack([pts.real, pts.imag], axis=1))
            blocks.append((1, 2))
        elif isinstance(f, EuclideanSpace):
            a = np.atleast_1d(np.asarray(apex.fulls[j], float))
            ring = np.empty((m, n_b, f.dim))
            for k, cp in enumerate(charts):
                bpt = np.atleast_1d(np.asarray(cp.fulls[j], float))
                ring[:, k, :] = a[None, :] + fractions[:, None] * (bpt - a)[None, :]
            pts = np.concatenate([a[None, :], ring.reshape(-1, f.dim)], axis=0)
            cols.append(pts)
            blocks.append((0, f.dim))
        else:
            raise UsageError(
                f"cone filling is not supported on factor {f.describe()}")
        beta = f.busemann_many(slc.center.ends[fi], slc.base.parts[fi], pts)
        dep_acc += float(theta[fi]) * np.asarray(beta)
    for j, fi in enumerate(slc.free_idx):
        a = float(apex.params[j])
        bs = np.array([float(cp.params[j]) for cp in charts])
        ring = a + fractions[:, None] * (bs - a)[None, :]
        params = np.concatenate([[a], ring.ravel()])
        cols.append(params[:, None])
        blocks.append((0, 1))
        dep_acc += float(theta[fi]) * params
    t_dep = -dep_acc / float(theta[slc.dep])
    cols.append(t_dep[:, None])
    blocks.append((0, 1))

    kinds = np.array([k for k, _ in blocks], np.int64)
    widths = np.array([w for _, w in blocks], np.int64)
    offs = np.concatenate([[0], np.cumsum(widths)[:-1]]).astype(np.int64)
    coords = np.ascontiguousarray(np.concatenate(cols, axis=1))

    def ring_index(l: int, k: int) -> int:
        return 1 + (l - 1) * n_b + (k % n_b)

    tris = []
    for k in range(n_b):
        tris.append((0, ring_index(1, k), ring_index(1, k + 1)))
    for l in range(1, m):
        for k in range(n_b):
            tris.append((ring_index(l, k), ring_index(l + 1, k),
                         ring_index(l + 1, k + 1)))
            tris.append((ring_index(l, k), ring_index(l + 1, k + 1),
                         ring_index(l, k + 1)))
    triangles = np.array(tris, dtype=np.int64)

    kern = get_backend(backend)
    side_a = kern.pair_dists(coords, kinds, offs, widths,
                             triangles[:, 0], triangles[:, 1])
    side_b = kern.pair_dists(coords, kinds, offs, widths,
                             triangles[:, 1], triangles[:, 2])
    side_c = kern.pair_dists(coords, kinds, offs, widths,
                             triangles[:, 2], triangles[:, 0])
    area = float(np.sum(_heron_areas(side_a, side_b, side_c)))

    outer = np.array([ring_index(m, k) for k in range(n_b)], np.int64)
    boundary_length = float(np.sum(kern.pair_dists(
        coords, kinds, offs, widths, outer, np.roll(outer, -1))))

    # membership residual over the mesh, from the packed coordinates
    residual = np.zeros(n_vertices)
    at = 0
    bi = 0
    for j, fi in enumerate(slc.full_idx):
        f = slc.space.factors[fi]
        w = int(widths[bi])
        if kinds[bi] == 1:
            pts = coords[:, at] + 1j * coords[:, at + 1]
        else:
            pts = coords[:, at:at + w]
        beta = np.asarray(f.busemann_many(slc.center.ends[fi],
                                          slc.base.parts[fi], pts))
        residual += float(theta[fi]) * beta
        at += w
        bi += 1
    for fi in list(slc.free_idx) + [slc.dep]:
        residual += float(theta[fi]) * coords[:, at]
        at += 1
        bi += 1

    return FilledDisc(tuple(loop), coords, triangles, area, boundary_length,
                      float(np.max(np.abs(residual))))


def chart_circle_loop(slc: Slice, radius: float, n_boundary: int = 256,
                      plane: str = "auto") -> list[ProductPoint]:
    """Round circle of the given radius in a two-dimensional chart plane.

    Planes, tried in this order under "auto":
      "params"    - two free line parameters (flat plane, exists when the
                    chart has at least two of them);
      "full-line" - the parameter along the center-directed line inside the
                    first full factor paired with the first free line
                    parameter (flat plane);
      "full"      - metric circle inside the first full factor (only for a
                    hyperbolic full factor; this plane is curved, so fills
                    grow subquadratically by hyperbolic thinness).
    """
    if radius <= 0.0:
        raise UsageError("radius must be positive")
    if n_boundary < 3:
        raise UsageError("need at least 3 boundary vertices")
    if plane == "auto":
        if len(slc.free_idx) >= 2:
            plane = "params"
        elif slc.k >= 1 and len(slc.free_idx) >= 1:
            plane = "full-line"
        elif slc.k >= 1:
            plane = "full"
        else:
            raise UsageError("chart has no two-dimensional plane for loops")
    phis = 2.0 * math.pi * np.arange(n_boundary) / n_boundary
    us = radius * np.cos(phis)
    vs = radius * np.sin(phis)
    base_params = np.zeros(len(slc.free_idx))
    base_fulls = tuple(slc.base.parts[i] for i in slc.full_idx)

    loop = []
    if plane == "params":
        if len(slc.free_idx) < 2:
            raise UsageError("params plane needs two free line parameters")
        for u, v in zip(us, vs):
            params = base_params.copy()
            params[0] = u
            params[1] = v
            loop.append(slc.chart_inverse(
                ChartPoint(base_fulls, params)))
    elif plane == "full-line":
        if slc.k < 1 or len(slc.free_idx) < 1:
            raise UsageError("full-line plane needs a full factor and a free "
                             "line parameter")
        fi = slc.full_idx[0]
        f = slc.space.factors[fi]
        axis = f.line(slc.base.parts[fi], slc.center.ends[fi])
        for u, v in zip(us, vs):
            fulls = (axis.eval(float(u)),) + base_fulls[1:]
            params = base_params.copy()
            params[0] = v
            loop.append(slc.chart_inverse(
                ChartPoint(fulls, params)))
    elif plane == "full":
        if slc.k < 1:
            raise UsageError("full plane needs a full factor")
        fi = slc.full_idx[0]
        f = slc.space.factors[fi]
        if not isinstance(f, HyperbolicPlane):
            raise UsageError("metric circles are implemented for hyperbolic "
                             "full factors only")
        for phi in phis:
            fulls = (f.circle_point(slc.base.parts[fi], radius, float(phi)),) \
                + base_fulls[1:]
            loop.append(slc.chart_inverse(
                ChartPoint(fulls, base_params)))
    else:
        raise UsageError(f"unknown loop plane {plane!r}")
    return loop


@dataclass(frozen=True)
class FillRow:
    loop_id: str
    boundary_length: float
    area: float
    n_triangles: int


@dataclass(frozen=True)
class FillResult:
    rows: tuple
    slope: float
    intercept: float
    plane: str
    radii: tuple

    def csv_rows(self):
        for r in self.rows:
            yield (r.loop_id, r.boundary_length, r.area, r.n_triangles)


def fill_family(slc: Slice, radii=(1.0, 2.0, 4.0, 8.0, 16.0),
                n_boundary: int = 256, layers: int = 32, plane: str = "auto",
                backend: str | None = None) -> FillResult:
    """Cone-fill the circle family and fit the area-vs-boundary exponent."""
    rows = []
    used_plane = plane
    for r in radii:
        loop = chart_circle_loop(slc, float(r), n_boundary, plane)
        if plane == "auto":
            used_plane = _auto_plane(slc)
        disc = cone_fill_loop(slc, loop, layers, backend=backend)
        rows.append(FillRow(f"R{r:g}", disc.boundary_length, disc.area,
                            disc.n_triangles))
    slope, intercept = fit_exponent([(r.boundary_length, r.area) for r in rows])
    return FillResult(tuple(rows), slope, intercept, used_plane, tuple(radii))


def _auto_plane(slc: Slice) -> str:
    if len(slc.free_idx) >= 2:
        return "params"
    if slc.k >= 1 and len(slc.free_idx) >= 1:
        return "full-line"
    if slc.k >= 1:
        return "full"
    raise UsageError("chart has no two-dimensional plane for loops")
