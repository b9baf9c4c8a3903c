"""Finite products of Hadamard model factors with the l2 metric.

A product geodesic decomposes as sigma(t) = (sigma_i(t * theta_i)) where
the slope theta is a unit vector of per-factor speeds; boundary directions
are a slope together with a factor boundary point for every active factor
(theta_i > 0).  The product Busemann function splits across factors as

    b(x, y) = sum over active i of  theta_i * b_i(x_i, y_i),

which is the decomposition this module implements and the numeric limit
oracle cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArityError, DegenerateSegmentError, DomainError

SLOPE_TOL = 1e-12


def check_slope(theta) -> np.ndarray:
    """Validate a slope vector: nonnegative entries, unit l2 norm."""
    t = np.asarray(theta, dtype=float).copy()
    if t.ndim != 1 or t.size < 1:
        raise DomainError("slope must be a 1-d vector")
    if np.any(t < 0.0):
        raise DomainError("slope entries must be nonnegative")
    if abs(float(t @ t) - 1.0) > SLOPE_TOL:
        raise DomainError(f"slope must have unit norm, got |theta|^2 = {t @ t}")
    t.flags.writeable = False
    return t


@dataclass(frozen=True)
class DirectionClass:
    regular: bool
    active: tuple[int, ...]   # indices with theta_i > 0
    count: int                # number of active factors

    @property
    def kind(self) -> str:
        return "regular" if self.regular else "singular"


def classify_direction(theta) -> DirectionClass:
    t = check_slope(theta)
    active = tuple(int(i) for i in np.nonzero(t > 0.0)[0])
    return DirectionClass(len(active) == t.size, active, len(active))


@dataclass(frozen=True)
class BoundaryDirection:
    """Boundary point of a product: slope plus per-active-factor ends.

    ends is a tuple aligned with the factors; entries must be present
    exactly at the active indices and None elsewhere.
    """
    slope: np.ndarray
    ends: tuple

    def __post_init__(self):
        object.__setattr__(self, "slope", check_slope(self.slope))
        if len(self.ends) != self.slope.size:
            raise ArityError("one (possibly None) end per factor required")
        for i, (th, e) in enumerate(zip(self.slope, self.ends)):
            if (th > 0.0) != (e is not None):
                raise DomainError(
                    f"factor {i}: boundary end must be present iff theta_i > 0")

    @property
    def active(self) -> tuple[int, ...]:
        return classify_direction(self.slope).active

    @property
    def regular(self) -> bool:
        return bool(np.all(self.slope > 0.0))


@dataclass(frozen=True)
class ProductPoint:
    parts: tuple

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __iter__(self):
        return iter(self.parts)


def as_product_point(p) -> ProductPoint:
    if isinstance(p, ProductPoint):
        return p
    return ProductPoint(tuple(p))


@dataclass(frozen=True)
class ProductSegment:
    space: "ProductSpace"
    segments: tuple      # factor segment or None where the factor is constant
    constants: tuple     # factor point where segments[i] is None
    slope: np.ndarray
    length: float

    def eval(self, t: float) -> ProductPoint:
        if t < -1e-9 or t > self.length + 1e-9:
            raise DomainError(f"segment parameter {t} outside [0, {self.length}]")
        parts = []
        for seg, const, th in zip(self.segments, self.constants, self.slope):
            parts.append(const if seg is None else seg.eval(t * th))
        return ProductPoint(tuple(parts))


@dataclass(frozen=True)
class ProductRay:
    space: "ProductSpace"
    start: ProductPoint
    direction: BoundaryDirection
    rays: tuple          # factor ray or None off the active set

    @property
    def end(self) -> BoundaryDirection:
        return self.direction

    @property
    def max_param(self) -> float:
        """Largest parameter every active factor ray can evaluate: factor i
        sees parameter t * theta_i and has its own safe range."""
        caps = []
        for i, ray in enumerate(self.rays):
            if ray is not None:
                cap = getattr(ray, "max_param",
                              getattr(ray.space, "max_ray_param", 2.0 ** 20))
                caps.append(cap / float(self.direction.slope[i]))
        return min(caps)

    def eval(self, t: float) -> ProductPoint:
        if t < -1e-9:
            raise DomainError("ray parameter must be nonnegative")
        parts = []
        for i, ray in enumerate(self.rays):
            if ray is None:
                parts.append(self.start.parts[i])
            else:
                parts.append(ray.eval(t * float(self.direction.slope[i])))
        return ProductPoint(tuple(parts))


@dataclass(frozen=True)
class ProductLine:
    space: "ProductSpace"
    base: ProductPoint
    direction: BoundaryDirection
    lines: tuple         # factor line or None off the active set

    @property
    def forward_end(self) -> BoundaryDirection:
        return self.direction

    def eval(self, t: float) -> ProductPoint:
        parts = []
        for i, line in enumerate(self.lines):
            if line is None:
                parts.append(self.base.parts[i])
            else:
                parts.append(line.eval(t * float(self.direction.slope[i])))
        return ProductPoint(tuple(parts))


class ProductSpace:
    """Ordered product of model factors with d = sqrt(sum d_i^2)."""

    # dense limit schedule: skewed slopes leave a narrow clean zone between
    # the slowest factor transient and the ray evaluation horizon
    limit_ratio = 2.0 ** 0.25
    limit_window = 8

    def __init__(self, factors):
        factors = tuple(factors)
        if len(factors) < 1:
            raise DomainError("a product needs at least one factor")
        self.factors = factors

    def __repr__(self):
        return f"ProductSpace({list(self.factors)!r})"

    @property
    def arity(self) -> int:
        return len(self.factors)

    def describe(self) -> str:
        return "*".join(f.describe() for f in self.factors)

    # -- points ----------------------------------------------------------

    def check_point(self, p) -> ProductPoint:
        p = as_product_point(p)
        if len(p.parts) != self.arity:
            raise ArityError(
                f"point has {len(p.parts)} parts, space has {self.arity} factors")
        return ProductPoint(tuple(f.check_point(x)
                                  for f, x in zip(self.factors, p.parts)))

    def check_direction(self, d: BoundaryDirection) -> BoundaryDirection:
        if d.slope.size != self.arity:
            raise ArityError("direction arity does not match the product")
        ends = []
        for f, th, e in zip(self.factors, d.slope, d.ends):
            ends.append(None if e is None else f.check_end(e))
        return BoundaryDirection(d.slope, tuple(ends))

    def point_eq(self, p, q, tol: float = 1e-12) -> bool:
        p = self.check_point(p)
        q = self.check_point(q)
        return all(f.point_eq(x, y, tol)
                   for f, x, y in zip(self.factors, p.parts, q.parts))

    # -- metric and geodesics ---------------------------------------------

    def dist(self, x, y) -> float:
        x = self.check_point(x)
        y = self.check_point(y)
        return math.sqrt(sum(f.dist(a, b) ** 2
                             for f, a, b in zip(self.factors, x.parts, y.parts)))

    def slope_of_segment(self, x, y) -> np.ndarray:
        """Per-factor speeds d_i(x_i, y_i) / d(x, y); unit norm."""
        x = self.check_point(x)
        y = self.check_point(y)
        di = np.array([f.dist(a, b)
                       for f, a, b in zip(self.factors, x.parts, y.parts)])
        d = float(np.linalg.norm(di))
        if d == 0.0:
            raise DegenerateSegmentError("slope of a degenerate segment")
        t = di / d
        t.flags.writeable = False
        return t

    def geodesic(self, x, y) -> ProductSegment:
        x = self.check_point(x)
        y = self.check_point(y)
        theta = self.slope_of_segment(x, y)
        d = self.dist(x, y)
        segs, consts = [], []
        for f, a, b, th in zip(self.factors, x.parts, y.parts, theta):
            if th > 0.0:
                segs.append(f.geodesic(a, b))
                consts.append(None)
            else:
                segs.append(None)
                consts.append(a)
        return ProductSegment(self, tuple(segs), tuple(consts), theta, d)

    def ray(self, x, direction: BoundaryDirection) -> ProductRay:
        x = self.check_point(x)
        direction = self.check_direction(direction)
        rays = []
        for i, f in enumerate(self.factors):
            e = direction.ends[i]
            rays.append(None if e is None else f.ray(x.parts[i], e))
        return ProductRay(self, x, direction, tuple(rays))

    def line(self, x, direction: BoundaryDirection) -> ProductLine:
        """Complete geodesic through x toward the direction (eval(0) = x)."""
        x = self.check_point(x)
        direction = self.check_direction(direction)
        lines = []
        for i, f in enumerate(self.factors):
            e = direction.ends[i]
            lines.append(None if e is None else f.line(x.parts[i], e))
        return ProductLine(self, x, direction, tuple(lines))

    def ray_point(self, x, direction: BoundaryDirection, t: float) -> ProductPoint:
        """Unit-speed point toward the direction: factor i at ray_i(t*theta_i)."""
        if t < 0.0:
            raise DomainError("ray parameter must be nonnegative")
        return self.ray(x, direction).eval(t)

    # -- Busemann ---------------------------------------------------------

    def busemann(self, direction: BoundaryDirection, x, y) -> float:
        """Product Busemann value via the per-factor decomposition."""
        direction = self.check_direction(direction)
        x = self.check_point(x)
        y = self.check_point(y)
        total = 0.0
        for i, f in enumerate(self.factors):
            e = direction.ends[i]
            if e is not None:
                total += float(direction.slope[i]) * f.busemann(e, x.parts[i],
                                                                y.parts[i])
        return total

    @property
    def max_ray_param(self) -> float:
        # fallback only; limit queries prefer the per-ray cap, which scales
        # each factor's range by 1/theta_i
        return min(f.max_ray_param for f in self.factors)

    # -- sampling helpers --------------------------------------------------

    def random_point(self, rng: np.random.Generator) -> ProductPoint:
        return ProductPoint(tuple(f.random_point(rng) for f in self.factors))

    def random_direction(self, rng: np.random.Generator,
                         singular_prob: float = 0.0) -> BoundaryDirection:
        t = rng.uniform(0.2, 1.0, self.arity)
        if self.arity > 1 and rng.random() < singular_prob:
            t[int(rng.integers(0, self.arity))] = 0.0
        t = t / np.linalg.norm(t)
        ends = tuple(f.random_end(rng) if th > 0.0 else None
                     for f, th in zip(self.factors, t))
        return BoundaryDirection(t, ends)
