"""Property suites behind the `verify` CLI subcommand.

Each suite samples seeded random configurations on the requested space and
counts violations of the library's contracts: Busemann cocycle/bound and
closed-vs-limit agreement, unit-speed geodesics, the CAT(0) midpoint
comparison, the product Busemann decomposition against the direct limit,
and the slice chart roundtrip/bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .busemann import busemann_limit
from .products import ProductSpace
from .slices import Base, Full, Horosphere, LineFactor, SliceSpec, make_slice
from .specparse import ParsedSpec

CLOSED_VS_LIMIT_TOL = 1e-6
EXACT_TOL = 1e-9
CHART_TOL = 1e-9
MEMBER_TOL = 1e-8


@dataclass
class SuiteResult:
    name: str
    checks: int
    failures: int
    worst: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name}: {self.checks} checks, "
                f"{self.failures} failures (worst residual {self.worst:.3e})")


class _Suite:
    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures = 0
        self.worst = 0.0

    def check(self, residual: float, tol: float):
        self.checks += 1
        residual = abs(residual)
        self.worst = max(self.worst, residual)
        if not residual <= tol:
            self.failures += 1

    def result(self) -> SuiteResult:
        return SuiteResult(self.name, self.checks, self.failures, self.worst)


def _factor_busemann_suite(space: ProductSpace, rng, n: int, tol: float):
    s = _Suite("factor Busemann calculus")
    for f in space.factors:
        for _ in range(n):
            x, y, z = (f.random_point(rng) for _ in range(3))
            xi = f.random_end(rng)
            closed = f.busemann(xi, x, y)
            s.check(closed - busemann_limit(f, xi, x, y), tol)
            s.check(f.busemann(xi, x, z) - closed - f.busemann(xi, y, z),
                    EXACT_TOL)
            s.check(max(0.0, abs(closed) - f.dist(x, y)), EXACT_TOL)
            t = float(rng.uniform(0.1, 3.0))
            on_ray = f.ray(x, xi).eval(t)
            s.check(f.busemann(xi, x, on_ray) - t, tol)
    return s.result()


def _product_busemann_suite(space: ProductSpace, direction, rng, n: int,
                            tol: float):
    s = _Suite("product Busemann decomposition")
    for k in range(n):
        d = direction if k % 2 == 0 else space.random_direction(rng, 0.3)
        x, y, z = (space.random_point(rng) for _ in range(3))
        closed = space.busemann(d, x, y)
        s.check(closed - busemann_limit(space, d, x, y), tol)
        s.check(space.busemann(d, x, z) - closed - space.busemann(d, y, z),
                EXACT_TOL)
        s.check(max(0.0, abs(closed) - space.dist(x, y)), EXACT_TOL)
    return s.result()


def _geodesic_suite(space: ProductSpace, rng, n: int):
    s = _Suite("geodesics and CAT(0) comparison")
    for _ in range(n):
        x, y, z = (space.random_point(rng) for _ in range(3))
        d = space.dist(x, y)
        if d == 0.0:
            continue
        seg = space.geodesic(x, y)
        t, u = sorted(rng.uniform(0.0, d, 2))
        s.check(space.dist(seg.eval(float(t)), seg.eval(float(u)))
                - (u - t), EXACT_TOL)
        m = seg.eval(d / 2.0)
        gap = space.dist(m, z) ** 2 - (0.5 * space.dist(x, z) ** 2
                                       + 0.5 * space.dist(y, z) ** 2
                                       - 0.25 * d * d)
        s.check(max(0.0, gap), EXACT_TOL)
    return s.result()


def _default_slices(horo: Horosphere):
    """The k = 0 slice and, when q >= 2, the maximal slice."""
    space = horo.space
    active = horo.center.active
    slices = []
    all_lines = []
    for i in range(space.arity):
        if i in active:
            f = space.factors[i]
            all_lines.append(LineFactor(f.line(horo.base.parts[i],
                                               horo.center.ends[i])))
        else:
            all_lines.append(Base())
    slices.append(make_slice(horo, SliceSpec(tuple(all_lines))))
    if len(active) >= 2:
        entries = list(all_lines)
        entries[active[0]] = Full()
        slices.append(make_slice(horo, SliceSpec(tuple(entries))))
    return slices


def _slice_suite(horo: Horosphere, rng, n: int):
    s = _Suite("slice chart and paths")
    for slc in _default_slices(horo):
        for _ in range(max(4, n // 2)):
            c = slc.random_chart_point(rng)
            x = slc.chart_inverse(c)
            s.check(horo.value(x), MEMBER_TOL)
            c2 = slc.chart_forward(x)
            round_trip = float(np.max(np.abs(c2.params - c.params))) \
                if c.params.size else 0.0
            for j, i in enumerate(slc.full_idx):
                round_trip = max(round_trip,
                                 slc.space.factors[i].dist(c2.fulls[j],
                                                           c.fulls[j]))
            s.check(round_trip, CHART_TOL)
        for _ in range(max(2, n // 8)):
            cx = slc.random_chart_point(rng)
            cy = slc.random_chart_point(rng)
            x = slc.chart_inverse(cx)
            y = slc.chart_inverse(cy)
            s.check(max(0.0, slc.chart_dist(cx, cy) - slc.space.dist(x, y)),
                    EXACT_TOL)
            path = slc.path(x, y, samples=256)
            s.check(max(0.0, path.length - path.bound), 1e-6)
            s.check(float(np.max(np.abs(path.membership_residuals()))),
                    MEMBER_TOL)
    return s.result()


def run_verify(spec: ParsedSpec, seed: int, n: int = 200,
               tol: float = CLOSED_VS_LIMIT_TOL) -> list[SuiteResult]:
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    space = spec.space
    direction = spec.direction
    base = space.check_point(tuple(_canonical_base(f) for f in space.factors))
    horo = Horosphere(space, direction, base)
    results = [
        _factor_busemann_suite(space, rng, max(8, n // space.arity), tol),
        _product_busemann_suite(space, direction, rng, max(8, n // 8), tol),
        _geodesic_suite(space, rng, n),
        _slice_suite(horo, rng, max(8, n // 4)),
    ]
    return results


def _canonical_base(factor):
    from .euclidean import EuclideanSpace
    from .hyperbolic import HyperbolicPlane
    from .trees import TreePoint

    if isinstance(factor, HyperbolicPlane):
        return 1j
    if isinstance(factor, EuclideanSpace):
        return np.zeros(factor.dim)
    return TreePoint("")
