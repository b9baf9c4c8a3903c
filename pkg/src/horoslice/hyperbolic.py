"""Hyperbolic plane in the upper half-plane model.

Points are complex numbers z with Im z > 0.  Boundary points are real
numbers or math.inf (the top end).  Geodesics are vertical lines and
semicircles orthogonal to the real axis; all three path kinds are realized
as Moebius images of the standard vertical axis t -> i*e^t, so evaluation,
parameterization, and projection onto a geodesic share one code path.

Numerical care:
  * distances use  acosh(1 + u) = log1p(u + sqrt(u(2+u)))  with log-space
    fallbacks, so astronomically separated points still work;
  * the imaginary part of a Moebius image is computed from the identity
    Im(Mz) = det(M) Im z / |cz + d|^2, never by complex division, which
    loses all precision as the argument runs off to the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSegmentError, DomainError

EQ_TOL = 1e-12

Mobius = tuple[float, float, float, float]  # (a, b, c, d), det > 0


def _mob_apply(m: Mobius, z: complex) -> complex:
    a, b, c, d = m
    den_re = c * z.real + d
    den_im = c * z.imag
    den2 = den_re * den_re + den_im * den_im
    num_re = a * z.real + b
    num_im = a * z.imag
    re = (num_re * den_re + num_im * den_im) / den2
    im = (a * d - b * c) * z.imag / den2
    return complex(re, im)


def _mob_apply_many(m: Mobius, z: np.ndarray) -> np.ndarray:
    a, b, c, d = m
    zr = z.real
    zi = z.imag
    den_re = c * zr + d
    den_im = c * zi
    den2 = den_re * den_re + den_im * den_im
    re = ((a * zr + b) * den_re + (a * zi) * den_im) / den2
    im = (a * d - b * c) * zi / den2
    return re + 1j * im


def _mob_inverse(m: Mobius) -> Mobius:
    a, b, c, d = m
    return (d, -b, -c, a)


def _mob_compose(m: Mobius, n: Mobius) -> Mobius:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _mob_boundary(m: Mobius, xi: float) -> float:
    a, b, c, d = m
    if math.isinf(xi):
        return a / c if c != 0.0 else math.inf
    den = c * xi + d
    if den == 0.0:
        return math.inf
    return (a * xi + b) / den


def _check_z(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("hyperbolic point has non-finite coordinates")
    if z.imag <= 0.0:
        raise DomainError(f"hyperbolic point needs Im z > 0, got {z}")
    return z


def _check_end(xi) -> float:
    if isinstance(xi, complex):
        if xi.imag != 0.0:
            raise DomainError("hyperbolic boundary point must be real or inf")
        xi = xi.real
    xi = float(xi)
    if math.isnan(xi):
        raise DomainError("hyperbolic boundary point is NaN")
    return xi


def _dist(z: complex, w: complex) -> float:
    dre = z.real - w.real
    dim = z.imag - w.imag
    scale = max(abs(dre), abs(dim))
    if scale == 0.0:
        return 0.0
    log_num = 2.0 * math.log(scale) + math.log((dre / scale) ** 2 + (dim / scale) ** 2)
    log_u = log_num - math.log(2.0) - math.log(z.imag) - math.log(w.imag)
    if log_u > 27.6:  # u > 1e12: acosh(1+u) = log(2u) to double precision
        return math.log(2.0) + log_u
    u = math.exp(log_u)
    return math.log1p(u + math.sqrt(u * (2.0 + u)))


def _dist_many(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    d2 = (z.real - w.real) ** 2 + (z.imag - w.imag) ** 2
    u = d2 / (2.0 * z.imag * w.imag)
    small = np.minimum(u, 1e12)
    out = np.log1p(small + np.sqrt(small * (2.0 + small)))
    big = u > 1e12
    if np.any(big):
        out = np.where(big, np.log(2.0 * u), out)
    return out


@dataclass(frozen=True)
class HypSegment:
    space: "HyperbolicPlane"
    mob: Mobius
    t0: float
    length: float

    def eval(self, t: float) -> complex:
        if t < -1e-9 or t > self.length + 1e-9:
            raise DomainError(f"segment parameter {t} outside [0, {self.length}]")
        return _mob_apply(self.mob, 1j * math.exp(self.t0 + t))

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return _mob_apply_many(self.mob, 1j * np.exp(self.t0 + ts))


def _safe_axis_param(mob: Mobius, t0: float) -> float:
    """Largest axis parameter T with M(i e^{t0 + T}) still computable in
    doubles: vertical lines (c = 0) only grow the numerator, circles also
    square the denominator."""
    a, b, c, d = mob
    scale = math.log(max(abs(a), abs(c), 1.0))
    if c == 0.0:
        return 650.0 - t0 - scale
    return 345.0 - t0 - scale


@dataclass(frozen=True)
class HypRay:
    space: "HyperbolicPlane"
    mob: Mobius
    t0: float

    @property
    def end(self) -> float:
        return _mob_boundary(self.mob, math.inf)

    @property
    def max_param(self) -> float:
        return _safe_axis_param(self.mob, self.t0)

    def eval(self, t: float) -> complex:
        if t < -1e-9:
            raise DomainError("ray parameter must be nonnegative")
        return _mob_apply(self.mob, 1j * math.exp(self.t0 + t))

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return _mob_apply_many(self.mob, 1j * np.exp(self.t0 + ts))


@dataclass(frozen=True)
class HypLine:
    space: "HyperbolicPlane"
    mob: Mobius
    t0: float

    @property
    def forward_end(self) -> float:
        return _mob_boundary(self.mob, math.inf)

    @property
    def backward_end(self) -> float:
        return _mob_boundary(self.mob, 0.0)

    def eval(self, t: float) -> complex:
        return _mob_apply(self.mob, 1j * math.exp(self.t0 + t))

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return _mob_apply_many(self.mob, 1j * np.exp(self.t0 + ts))

    def param_of(self, p) -> float:
        """Parameter of the metric projection of p onto the line.

        The projection of w onto the standard axis is i|w|, so in axis
        coordinates the parameter is log|w|.
        """
        w = _mob_apply(_mob_inverse(self.mob), _check_z(p))
        return math.log(abs(w)) - self.t0

    def dist_to(self, p) -> float:
        return _dist(_check_z(p), self.eval(self.param_of(p)))

    def shifted(self, delta: float) -> "HypLine":
        """Line with eval'(t) = eval(t + delta)."""
        return HypLine(self.space, self.mob, self.t0 + delta)

    def fermi_point(self, s: float, w: float) -> complex:
        """Point at perpendicular distance w from the line point at s.

        Fermi coordinates of the standard axis: z = e^s (tanh w + i sech w),
        with metric cosh(w)^2 ds^2 + dw^2; positive w points toward the
        boundary side into which M maps the right half-plane.
        """
        base = math.exp(self.t0 + s) * complex(math.tanh(w), 1.0 / math.cosh(w))
        return _mob_apply(self.mob, base)

    def fermi_many(self, ss: np.ndarray, ws: np.ndarray) -> np.ndarray:
        ss = np.asarray(ss, dtype=float)
        ws = np.asarray(ws, dtype=float)
        base = np.exp(self.t0 + ss) * (np.tanh(ws) + 1j / np.cosh(ws))
        return _mob_apply_many(self.mob, base)

    def perpendicular_at(self, s: float) -> "HypLine":
        """The geodesic through eval(s) orthogonal to this line, parameterized
        so that perpendicular.eval(w) = fermi_point(s, w)."""
        half = math.exp((self.t0 + s) / 2.0)
        scale = (half, 0.0, 0.0, 1.0 / half)
        circle = _line_between_ends(-1.0, 1.0)
        return HypLine(self.space, _mob_compose(self.mob,
                                                _mob_compose(scale, circle)), 0.0)


def _line_between_ends(eta: float, xi: float) -> Mobius:
    """Unit-speed geodesic from end eta (t -> -inf) to end xi (t -> +inf)."""
    if eta == xi:
        raise DomainError("geodesic line needs two distinct boundary points")
    if math.isinf(xi):
        return (1.0, eta, 0.0, 1.0)             # eta + i e^t
    if math.isinf(eta):
        return (xi, -1.0, 1.0, 0.0)             # xi + i e^{-t}
    if xi > eta:
        s = math.sqrt(xi - eta)
        return (xi / s, eta / s, 1.0 / s, 1.0 / s)
    s = math.sqrt(eta - xi)
    return (xi / s, -eta / s, 1.0 / s, -1.0 / s)


class HyperbolicPlane:
    """The hyperbolic plane; curvature -1, upper half-plane coordinates."""

    limit_ratio = 2.0
    limit_window = 5
    max_ray_param = 300.0  # e^{+-t} must stay inside double range with margin

    def __repr__(self):
        return "HyperbolicPlane()"

    def __eq__(self, other):
        return isinstance(other, HyperbolicPlane)

    def __hash__(self):
        return hash("h2")

    def describe(self) -> str:
        return "h2"

    # -- points and boundary points ------------------------------------

    def check_point(self, p) -> complex:
        return _check_z(p)

    def check_end(self, xi) -> float:
        return _check_end(xi)

    def point_eq(self, p, q, tol: float = EQ_TOL) -> bool:
        p = _check_z(p)
        q = _check_z(q)
        return abs(p.real - q.real) <= tol and abs(p.imag - q.imag) <= tol

    def end_eq(self, a, b, tol: float = EQ_TOL) -> bool:
        a = _check_end(a)
        b = _check_end(b)
        if math.isinf(a) or math.isinf(b):
            return a == b
        return abs(a - b) <= tol

    # -- metric and geodesics ------------------------------------------

    def dist(self, x, y) -> float:
        return _dist(_check_z(x), _check_z(y))

    def dist_pairs(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return _dist_many(np.asarray(xs, complex), np.asarray(ys, complex))

    def geodesic(self, x, y) -> HypSegment:
        x = _check_z(x)
        y = _check_z(y)
        if x == y:
            raise DegenerateSegmentError("geodesic endpoints coincide")
        if x.real == y.real:
            mob = _line_between_ends(x.real, math.inf) if y.imag > x.imag \
                else _line_between_ends(math.inf, x.real)
            t0 = math.log(x.imag) if y.imag > x.imag else -math.log(x.imag)
        else:
            c = (abs(y) ** 2 - abs(x) ** 2) / (2.0 * (y.real - x.real))
            r = abs(x - c)
            mob = _line_between_ends(c - r, c + r) if y.real > x.real \
                else _line_between_ends(c + r, c - r)
            w = _mob_apply(_mob_inverse(mob), x)
            t0 = math.log(abs(w))
        return HypSegment(self, mob, t0, _dist(x, y))

    def _line_mob_through(self, x: complex, xi: float) -> tuple[Mobius, float]:
        if math.isinf(xi):
            return (1.0, x.real, 0.0, 1.0), math.log(x.imag)
        if x.real == xi:
            return (xi, -1.0, 1.0, 0.0), -math.log(x.imag)
        c = (abs(x) ** 2 - xi ** 2) / (2.0 * (x.real - xi))
        eta = 2.0 * c - xi
        mob = _line_between_ends(eta, xi)
        w = _mob_apply(_mob_inverse(mob), x)
        return mob, math.log(abs(w))

    def ray(self, x, xi) -> HypRay:
        x = _check_z(x)
        xi = _check_end(xi)
        mob, t0 = self._line_mob_through(x, xi)
        return HypRay(self, mob, t0)

    def line(self, x, xi) -> HypLine:
        """Complete geodesic through x with forward end xi (eval(0) = x)."""
        x = _check_z(x)
        xi = _check_end(xi)
        mob, t0 = self._line_mob_through(x, xi)
        return HypLine(self, mob, t0)

    # -- Busemann -------------------------------------------------------

    def busemann(self, xi, x, y) -> float:
        """Closed-form Busemann value b_xi(x, y); positive toward xi."""
        xi = _check_end(xi)
        x = _check_z(x)
        y = _check_z(y)
        if math.isinf(xi):
            return math.log(y.imag) - math.log(x.imag)
        ax = abs(x - xi)
        ay = abs(y - xi)
        if ax == 0.0 or ay == 0.0:
            raise DomainError("point coincides with the boundary center")
        return (math.log(y.imag) - math.log(x.imag)
                + 2.0 * (math.log(ax) - math.log(ay)))

    def busemann_many(self, xi, x, ys: np.ndarray) -> np.ndarray:
        xi = _check_end(xi)
        x = _check_z(x)
        ys = np.asarray(ys, complex)
        if math.isinf(xi):
            return np.log(ys.imag) - math.log(x.imag)
        return (np.log(ys.imag) - math.log(x.imag)
                + 2.0 * (math.log(abs(x - xi)) - np.log(np.abs(ys - xi))))

    # -- extras used by the experiment harness ---------------------------

    def circle_point(self, center, radius: float, phi: float) -> complex:
        """Point on the metric circle around center, at angle phi.

        phi = 0 is the top of the circle; the parameterization is by angle,
        not arclength.
        """
        center = _check_z(center)
        h = math.sqrt(center.imag)
        translate = (h, center.real / h, 0.0, 1.0 / h)  # i -> center
        rot = (math.cos(phi / 2.0), math.sin(phi / 2.0),
               -math.sin(phi / 2.0), math.cos(phi / 2.0))
        return _mob_apply(_mob_compose(translate, rot), 1j * math.exp(radius))

    # -- sampling helpers (tests and harness) ---------------------------

    def random_point(self, rng: np.random.Generator, scale: float = 3.0):
        return complex(rng.uniform(-scale, scale),
                       math.exp(rng.uniform(-2.0, 2.0)))

    def random_end(self, rng: np.random.Generator):
        if rng.random() < 0.25:
            return math.inf
        return float(rng.uniform(-3.0, 3.0))
