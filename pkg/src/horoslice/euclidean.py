"""Euclidean line and n-space as Hadamard model factors.

Points are float vectors (scalars are accepted and promoted for the line).
Boundary points are unit direction vectors.  The Busemann function centered
at direction v is  b_v(x, y) = <y - x, v>,  which is positive when y lies
deeper in the v-direction than x and equals d(x, y) exactly when y is on
the ray from x toward v.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSegmentError, DomainError

UNIT_TOL = 1e-12
EQ_TOL = 1e-12


def _as_vec(space: "EuclideanSpace", p) -> np.ndarray:
    v = np.atleast_1d(np.asarray(p, dtype=float))
    if v.ndim != 1 or v.shape[0] != space.dim:
        raise DomainError(f"expected a point of R^{space.dim}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("point has non-finite coordinates")
    return v


@dataclass(frozen=True)
class EuclideanSegment:
    space: "EuclideanSpace"
    start: np.ndarray
    direction: np.ndarray  # unit
    length: float

    def eval(self, t: float) -> np.ndarray:
        if t < -1e-9 or t > self.length + 1e-9:
            raise DomainError(f"segment parameter {t} outside [0, {self.length}]")
        return self.start + t * self.direction

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return self.start[None, :] + ts[:, None] * self.direction[None, :]


@dataclass(frozen=True)
class EuclideanRay:
    space: "EuclideanSpace"
    start: np.ndarray
    direction: np.ndarray

    @property
    def end(self) -> np.ndarray:
        return self.direction

    def eval(self, t: float) -> np.ndarray:
        if t < -1e-9:
            raise DomainError("ray parameter must be nonnegative")
        return self.start + t * self.direction

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return self.start[None, :] + ts[:, None] * self.direction[None, :]


@dataclass(frozen=True)
class EuclideanLine:
    space: "EuclideanSpace"
    base: np.ndarray       # eval(0)
    direction: np.ndarray  # unit, toward the forward end

    @property
    def forward_end(self) -> np.ndarray:
        return self.direction

    @property
    def backward_end(self) -> np.ndarray:
        return -self.direction

    def eval(self, t: float) -> np.ndarray:
        return self.base + t * self.direction

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return self.base[None, :] + ts[:, None] * self.direction[None, :]

    def param_of(self, p) -> float:
        """Parameter of the closest point of the line to p."""
        v = _as_vec(self.space, p)
        return float(np.dot(v - self.base, self.direction))

    def shifted(self, delta: float) -> "EuclideanLine":
        """Line with eval'(t) = eval(t + delta)."""
        return EuclideanLine(self.space, self.base + delta * self.direction,
                             self.direction)


class EuclideanSpace:
    """R^dim with the standard metric; dim = 1 is the Euclidean line."""

    # numeric-limit settings: the Busemann limit converges like 1/s, so the
    # oracle relies on series extrapolation over a dyadic schedule
    limit_ratio = 2.0
    limit_window = 6
    max_ray_param = 2.0 ** 14

    def __init__(self, dim: int = 1):
        if dim < 1:
            raise DomainError("dimension must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"EuclideanSpace({self.dim})"

    def __eq__(self, other):
        return isinstance(other, EuclideanSpace) and other.dim == self.dim

    def __hash__(self):
        return hash(("euclid", self.dim))

    def describe(self) -> str:
        return "r" if self.dim == 1 else f"r{self.dim}"

    # -- points and boundary points ------------------------------------

    def check_point(self, p) -> np.ndarray:
        return _as_vec(self, p)

    def check_end(self, xi) -> np.ndarray:
        v = _as_vec(self, xi)
        if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
            raise DomainError("boundary direction must be a unit vector")
        return v

    def point_eq(self, p, q, tol: float = EQ_TOL) -> bool:
        return bool(np.max(np.abs(_as_vec(self, p) - _as_vec(self, q))) <= tol)

    def end_eq(self, a, b, tol: float = EQ_TOL) -> bool:
        return bool(np.max(np.abs(self.check_end(a) - self.check_end(b))) <= tol)

    # -- metric and geodesics ------------------------------------------

    def dist(self, x, y) -> float:
        return float(np.linalg.norm(_as_vec(self, x) - _as_vec(self, y)))

    def dist_pairs(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return np.linalg.norm(np.asarray(xs, float) - np.asarray(ys, float), axis=-1)

    def geodesic(self, x, y) -> EuclideanSegment:
        x = _as_vec(self, x)
        y = _as_vec(self, y)
        d = float(np.linalg.norm(y - x))
        if d == 0.0:
            raise DegenerateSegmentError("geodesic endpoints coincide")
        return EuclideanSegment(self, x, (y - x) / d, d)

    def ray(self, x, xi) -> EuclideanRay:
        return EuclideanRay(self, _as_vec(self, x), self.check_end(xi))

    def line(self, x, xi) -> EuclideanLine:
        """Complete geodesic through x with forward end xi (eval(0) = x)."""
        return EuclideanLine(self, _as_vec(self, x), self.check_end(xi))

    # -- Busemann -------------------------------------------------------

    def busemann(self, xi, x, y) -> float:
        """Closed-form Busemann value b_xi(x, y); positive toward xi."""
        v = self.check_end(xi)
        return float(np.dot(_as_vec(self, y) - _as_vec(self, x), v))

    def busemann_many(self, xi, x, ys: np.ndarray) -> np.ndarray:
        v = self.check_end(xi)
        x = _as_vec(self, x)
        return (np.asarray(ys, float) - x[None, :]) @ v

    # -- sampling helpers (tests and harness) ---------------------------

    def random_point(self, rng: np.random.Generator, scale: float = 5.0):
        return rng.uniform(-scale, scale, self.dim)

    def random_end(self, rng: np.random.Generator):
        if self.dim == 1:
            return np.array([1.0 if rng.random() < 0.5 else -1.0])
        v = rng.normal(size=self.dim)
        return v / np.linalg.norm(v)
