"""Horospheres, slices, and the bilipschitz slice chart.

A horosphere is the zero set of the product Busemann function centered at a
boundary direction and based at a point o.  A k-slice constrains each factor
to one of three shapes: the whole factor ("full"), the image of a geodesic
line asymptotic to the center ("line"), or the single basepoint o_i
("base", forced off the active set).  With k full factors among the q
active ones (k <= q-1), dropping one distinguished line coordinate gives a
chart

    slice  ->  (product of full factors) x R^(q-k-1)

whose inverse solves the dropped parameter from the horosphere equation:

    t_dep = -(1/theta_dep) * sum over other active i of theta_i * b_i(o_i, x_i).

The chart never expands distances, and the constructive path built by
`Slice.path` certifies the upper bilipschitz bound sqrt(1 + 1/theta_dep^2)
sample by sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSliceError, NotInSliceError
from .products import BoundaryDirection, ProductPoint, ProductSpace

MEMBERSHIP_TOL = 1e-8
LINE_NORMALIZATION_TOL = 1e-9
END_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class Horosphere:
    space: ProductSpace
    center: BoundaryDirection
    base: ProductPoint

    def __post_init__(self):
        object.__setattr__(self, "center", self.space.check_direction(self.center))
        object.__setattr__(self, "base", self.space.check_point(self.base))

    def value(self, y) -> float:
        """Signed Busemann height of y: zero on the horosphere, positive on
        the deep side toward the center."""
        return self.space.busemann(self.center, self.base, y)

    def contains(self, y, tol: float = MEMBERSHIP_TOL) -> bool:
        return abs(self.value(y)) <= tol


def project_along_horospheres(line, x) -> object:
    """Projection p(x) = line(b(line(0), x)) along horospheres centered at
    the forward end of the line; works for factor and product lines."""
    space = line.space
    b = space.busemann(line.forward_end, line.eval(0.0), x)
    return line.eval(b)


# -- slice specification ------------------------------------------------

@dataclass(frozen=True)
class Full:
    pass


@dataclass(frozen=True)
class LineFactor:
    line: object  # a factor geodesic line with forward end = the center's end


@dataclass(frozen=True)
class Base:
    pass


@dataclass(frozen=True)
class SliceSpec:
    """Per-factor shapes, plus an optional choice of dependent line index.

    When dependent is None the line index with the largest slope entry is
    used (ties break to the lowest index), which minimizes the constructive
    path constant sqrt(1 + 1/theta_dep^2).
    """
    entries: tuple
    dependent: int | None = None


@dataclass(frozen=True)
class ChartPoint:
    """Image of a slice point: full-factor coordinates in factor order and
    the free line parameters (dependent index omitted)."""
    fulls: tuple
    params: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.params, dtype=float)).copy()
        p.flags.writeable = False
        object.__setattr__(self, "params", p)


class Slice:
    """A validated k-slice with its chart; construct via `make_slice`."""

    def __init__(self, horosphere: Horosphere, entries: tuple, dependent: int):
        self.horosphere = horosphere
        self.space = horosphere.space
        self.center = horosphere.center
        self.base = horosphere.base
        self.entries = entries
        self.theta = self.center.slope
        self.active = self.center.active
        self.full_idx = tuple(i for i, e in enumerate(entries)
                              if isinstance(e, Full))
        self.line_idx = tuple(i for i, e in enumerate(entries)
                              if isinstance(e, LineFactor))
        self.dep = dependent
        self.free_idx = tuple(l for l in self.line_idx if l != dependent)
        self.k = len(self.full_idx)

    def __repr__(self):
        shapes = ",".join("F" if isinstance(e, Full)
                          else "L" if isinstance(e, LineFactor) else "o"
                          for e in self.entries)
        return f"Slice({shapes}; dep={self.dep})"

    def line(self, i: int):
        return self.entries[i].line

    # -- chart ----------------------------------------------------------

    @property
    def chart_dim_note(self) -> str:
        return f"{self.k} full factor(s) and {len(self.free_idx)} line parameter(s)"

    def chart_dist(self, a: ChartPoint, b: ChartPoint) -> float:
        total = 0.0
        for j, i in enumerate(self.full_idx):
            total += self.space.factors[i].dist(a.fulls[j], b.fulls[j]) ** 2
        diff = a.params - b.params
        total += float(diff @ diff)
        return math.sqrt(total)

    def chart_forward(self, x) -> ChartPoint:
        """Chart image of a slice point; rejects points off the slice."""
        x = self.space.check_point(x)
        if abs(self.horosphere.value(x)) > MEMBERSHIP_TOL:
            raise NotInSliceError(
                f"point is off the horosphere by {self.horosphere.value(x):.3e}")
        params = []
        for i, e in enumerate(self.entries):
            f = self.space.factors[i]
            if isinstance(e, Base):
                if f.dist(x.parts[i], self.base.parts[i]) > MEMBERSHIP_TOL:
                    raise NotInSliceError(f"factor {i}: point must equal the basepoint")
            elif isinstance(e, LineFactor):
                t = f.busemann(self.center.ends[i], self.base.parts[i], x.parts[i])
                if f.dist(x.parts[i], e.line.eval(t)) > MEMBERSHIP_TOL:
                    raise NotInSliceError(f"factor {i}: point is off the slice line")
                if i != self.dep:
                    params.append(t)
        fulls = tuple(x.parts[i] for i in self.full_idx)
        return ChartPoint(fulls, np.array(params) if params else np.empty(0))

    def _dependent_param(self, fulls: tuple, params: np.ndarray) -> float:
        acc = 0.0
        for j, i in enumerate(self.full_idx):
            f = self.space.factors[i]
            acc += float(self.theta[i]) * f.busemann(self.center.ends[i],
                                                     self.base.parts[i], fulls[j])
        for j, l in enumerate(self.free_idx):
            acc += float(self.theta[l]) * float(params[j])
        return -acc / float(self.theta[self.dep])

    def chart_inverse(self, c: ChartPoint) -> ProductPoint:
        if len(c.fulls) != len(self.full_idx) or c.params.size != len(self.free_idx):
            raise NotInSliceError(
                f"chart point needs {len(self.full_idx)} full coordinates and "
                f"{len(self.free_idx)} line parameters")
        t_dep = self._dependent_param(c.fulls, c.params)
        parts: list = list(self.base.parts)
        for j, i in enumerate(self.full_idx):
            parts[i] = self.space.factors[i].check_point(c.fulls[j])
        for j, l in enumerate(self.free_idx):
            parts[l] = self.line(l).eval(float(c.params[j]))
        parts[self.dep] = self.line(self.dep).eval(t_dep)
        return ProductPoint(tuple(parts))

    # -- bounds -----------------------------------------------------------

    def bilipschitz_constants(self) -> tuple[float, float]:
        """Uniform chart bounds (lower, upper): the chart never expands, and
        expands back by at most sqrt(1 + max over active 1/theta_i^2)."""
        worst = max(1.0 / float(self.theta[i]) ** 2 for i in self.active)
        return 1.0, math.sqrt(1.0 + worst)

    @property
    def path_constant(self) -> float:
        """Constructive per-path constant sqrt(1 + 1/theta_dep^2)."""
        return math.sqrt(1.0 + 1.0 / float(self.theta[self.dep]) ** 2)

    # -- the in-slice path ------------------------------------------------

    def path(self, x, y, samples: int = 1024) -> "SlicePath":
        """Polyline from x to y inside the slice.

        Every non-dependent coordinate moves along its own geodesic at
        constant speed d_i / chart_dist; the dependent coordinate follows
        the unique compensation parameter that keeps every sample exactly
        on the horosphere.  The polyline length is bounded by
        path_constant * chart_dist.
        """
        if samples < 2:
            raise NotInSliceError("a path needs at least two samples")
        cx = self.chart_forward(x)
        cy = self.chart_forward(y)
        dbar = self.chart_dist(cx, cy)
        x = self.space.check_point(x)
        y = self.space.check_point(y)
        if dbar == 0.0:
            return SlicePath(self, x, y, np.zeros(1), {}, np.zeros(1), 0.0, 0.0)

        ts = np.linspace(0.0, dbar, samples)
        factor_samples: dict[int, object] = {}
        busemann_terms = np.zeros(samples)
        for j, i in enumerate(self.full_idx):
            f = self.space.factors[i]
            if f.dist(cx.fulls[j], cy.fulls[j]) == 0.0:
                pts = [cx.fulls[j]] * samples
                beta = np.full(samples, f.busemann(self.center.ends[i],
                                                   self.base.parts[i], cx.fulls[j]))
            else:
                seg = f.geodesic(cx.fulls[j], cy.fulls[j])
                pts = seg.eval_many(ts * (seg.length / dbar))
                beta = np.asarray(f.busemann_many(self.center.ends[i],
                                                  self.base.parts[i], pts))
            factor_samples[i] = pts
            busemann_terms += float(self.theta[i]) * beta
        for j, l in enumerate(self.free_idx):
            ps = cx.params[j] + ts * ((cy.params[j] - cx.params[j]) / dbar)
            factor_samples[l] = self.line(l).eval_many(ps)
            busemann_terms += float(self.theta[l]) * ps
        gamma = -busemann_terms / float(self.theta[self.dep])
        factor_samples[self.dep] = self.line(self.dep).eval_many(gamma)

        chord_sq = np.zeros(samples - 1)
        for i, pts in factor_samples.items():
            f = self.space.factors[i]
            if isinstance(pts, list) and all(p is pts[0] for p in pts):
                continue
            seg_d = np.asarray(f.dist_pairs(pts[:-1], pts[1:]))
            chord_sq += seg_d ** 2
        length = float(np.sum(np.sqrt(chord_sq)))
        return SlicePath(self, x, y, ts, factor_samples, gamma, dbar, length)

    # -- sampling helper for tests and the harness -------------------------

    def random_chart_point(self, rng: np.random.Generator,
                           param_scale: float = 3.0) -> ChartPoint:
        fulls = tuple(self.space.factors[i].random_point(rng)
                      for i in self.full_idx)
        params = rng.uniform(-param_scale, param_scale, len(self.free_idx))
        return ChartPoint(fulls, params)


@dataclass(frozen=True)
class SlicePath:
    slice: Slice
    start: ProductPoint
    stop: ProductPoint
    ts: np.ndarray
    factor_samples: dict
    dependent_params: np.ndarray
    chart_dist: float
    length: float

    @property
    def bound(self) -> float:
        return self.slice.path_constant * self.chart_dist

    @property
    def points(self) -> list[ProductPoint]:
        n = self.ts.size
        if not self.factor_samples:
            return [self.start]
        parts_by_factor = {}
        for i in range(self.slice.space.arity):
            if i in self.factor_samples:
                parts_by_factor[i] = self.factor_samples[i]
            else:
                parts_by_factor[i] = [self.slice.base.parts[i]] * n
        out = []
        for t in range(n):
            out.append(ProductPoint(tuple(
                parts_by_factor[i][t] for i in range(self.slice.space.arity))))
        return out

    def membership_residuals(self) -> np.ndarray:
        h = self.slice.horosphere
        return np.array([h.value(p) for p in self.points])


def make_slice(horosphere: Horosphere, spec: SliceSpec) -> Slice:
    """Validate a slice specification against the horosphere and normalize
    its lines so that each satisfies b(o_i, line(0)) = 0."""
    space = horosphere.space
    center = horosphere.center
    entries = tuple(spec.entries)
    if len(entries) != space.arity:
        raise InvalidSliceError("one entry per factor required")

    active = set(center.active)
    q = len(active)
    normalized: list = []
    for i, e in enumerate(entries):
        f = space.factors[i]
        if i not in active:
            if not isinstance(e, Base):
                raise InvalidSliceError(
                    f"factor {i} is inactive (theta_i = 0) and must be Base")
            normalized.append(e)
            continue
        if isinstance(e, Base):
            raise InvalidSliceError(
                f"factor {i} is active and must be Full or a Line")
        if isinstance(e, Full):
            normalized.append(e)
            continue
        line = e.line
        if getattr(line, "space", None) != f:
            raise InvalidSliceError(f"factor {i}: line belongs to another space")
        if not f.end_eq(line.forward_end, center.ends[i], tol=END_MATCH_TOL):
            raise InvalidSliceError(
                f"factor {i}: line must point toward the slice center")
        # b(o_i, line(t)) = b0 + t, so shifting the parameter by -b0 puts
        # the zero of the Busemann function at parameter 0
        b0 = f.busemann(center.ends[i], horosphere.base.parts[i], line.eval(0.0))
        if abs(b0) > LINE_NORMALIZATION_TOL:
            line = line.shifted(-b0)
        normalized.append(LineFactor(line))

    k = sum(1 for e in normalized if isinstance(e, Full))
    if k > q - 1:
        raise InvalidSliceError(
            f"at most q-1 = {q - 1} full factors allowed, got {k}")
    line_idx = [i for i, e in enumerate(normalized) if isinstance(e, LineFactor)]
    if spec.dependent is None:
        dep = max(line_idx, key=lambda i: (float(center.slope[i]), -i))
    else:
        dep = spec.dependent
        if dep not in line_idx:
            raise InvalidSliceError("dependent index must be one of the line factors")
    return Slice(horosphere, tuple(normalized), dep)
