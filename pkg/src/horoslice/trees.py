"""Infinite regular simplicial tree with unit edges.

Vertices are addressed by reduced words over the digits {0, ..., d-1}: the
root is the empty word, and two vertices are adjacent iff one word extends
the other by a single letter different from its last (so every vertex has
exactly d neighbours and words never repeat a letter twice in a row).

A point is a pair (word, offset): the location at distance `offset` from
vertex `word` toward its parent, with offset in [0, 1).  Vertices have
offset 0.  Ends are eventually periodic infinite reduced words, stored as
(preperiod, period); they are exactly the finitely representable boundary
points of the tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSegmentError, DomainError

OFFSET_TOL = 1e-12


@dataclass(frozen=True)
class TreePoint:
    word: str
    offset: float = 0.0

    @property
    def depth(self) -> float:
        """Distance from the root."""
        return len(self.word) - self.offset

    def __repr__(self):
        if self.offset == 0.0:
            return f"TreePoint({self.word!r})"
        return f"TreePoint({self.word!r}, {self.offset})"


@dataclass(frozen=True)
class TreeEnd:
    """Eventually periodic end: the infinite word preperiod + period^inf."""
    preperiod: str
    period: str

    def prefix(self, n: int) -> str:
        if n <= len(self.preperiod):
            return self.preperiod[:n]
        k = n - len(self.preperiod)
        reps = -(-k // len(self.period))
        return self.preperiod + (self.period * reps)[:k]

    def letter(self, i: int) -> str:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def __repr__(self):
        return f"TreeEnd({self.preperiod!r}, {self.period!r})"


def _is_reduced(word: str) -> bool:
    return all(word[i] != word[i + 1] for i in range(len(word) - 1))


def _common_prefix_len(word: str, other) -> int:
    """Common prefix length of a finite word with a word or end."""
    if isinstance(other, TreeEnd):
        other = other.prefix(len(word))
    n = min(len(word), len(other))
    for i in range(n):
        if word[i] != other[i]:
            return i
    return n


@dataclass(frozen=True)
class TreeSegment:
    space: "RegularTree"
    start: TreePoint
    stop: TreePoint
    meet_depth: float
    length: float

    def eval(self, t: float) -> TreePoint:
        if t < -1e-9 or t > self.length + 1e-9:
            raise DomainError(f"segment parameter {t} outside [0, {self.length}]")
        t = min(max(t, 0.0), self.length)
        up = self.start.depth - self.meet_depth
        if t <= up:
            return _point_at_depth(self.start.word, self.start.depth - t)
        return _point_at_depth(self.stop.word, self.meet_depth + (t - up))

    def eval_many(self, ts) -> list:
        return [self.eval(float(t)) for t in np.asarray(ts, float)]


@dataclass(frozen=True)
class TreeRay:
    space: "RegularTree"
    start: TreePoint
    end: TreeEnd
    meet_depth: float

    def eval(self, t: float) -> TreePoint:
        if t < -1e-9:
            raise DomainError("ray parameter must be nonnegative")
        t = max(t, 0.0)
        up = self.start.depth - self.meet_depth
        if t <= up:
            return _point_at_depth(self.start.word, self.start.depth - t)
        depth = self.meet_depth + (t - up)
        return _point_at_depth(self.end.prefix(int(math.ceil(depth - OFFSET_TOL)) + 1),
                               depth)

    def eval_many(self, ts) -> list:
        return [self.eval(float(t)) for t in np.asarray(ts, float)]


@dataclass(frozen=True)
class TreeLine:
    """Bi-infinite geodesic between two distinct ends.

    The raw parameter is 0 at the branch vertex where the two ends diverge;
    `shift` relocates parameter 0 (eval(t) = raw(shift + t)).
    """
    space: "RegularTree"
    fwd: TreeEnd
    bwd: TreeEnd
    branch_depth: int
    shift: float = 0.0

    @property
    def forward_end(self) -> TreeEnd:
        return self.fwd

    @property
    def backward_end(self) -> TreeEnd:
        return self.bwd

    def _raw_eval(self, t: float) -> TreePoint:
        side = self.fwd if t >= 0.0 else self.bwd
        depth = self.branch_depth + abs(t)
        return _point_at_depth(side.prefix(int(math.ceil(depth - OFFSET_TOL)) + 1),
                               depth)

    def eval(self, t: float) -> TreePoint:
        return self._raw_eval(self.shift + t)

    def eval_many(self, ts) -> list:
        return [self.eval(float(t)) for t in np.asarray(ts, float)]

    def _raw_param_of(self, p: TreePoint) -> float:
        a = _common_prefix_len(p.word, self.fwd)
        b = _common_prefix_len(p.word, self.bwd)
        if a > self.branch_depth:
            return min(float(a), p.depth) - self.branch_depth
        if b > self.branch_depth:
            return self.branch_depth - min(float(b), p.depth)
        return 0.0

    def param_of(self, p: TreePoint) -> float:
        """Parameter of the metric projection of p onto the line."""
        return self._raw_param_of(p) - self.shift

    def dist_to(self, p: TreePoint) -> float:
        return self.space.dist(p, self.eval(self.param_of(p)))

    def shifted(self, delta: float) -> "TreeLine":
        return TreeLine(self.space, self.fwd, self.bwd, self.branch_depth,
                        self.shift + delta)


def _point_at_depth(word: str, depth: float) -> TreePoint:
    """Point at the given depth on the root path through `word`."""
    k = int(math.ceil(depth - OFFSET_TOL))
    if k < 0 or k > len(word):
        raise DomainError(f"depth {depth} not on the path through {word!r}")
    off = k - depth
    if off <= OFFSET_TOL:
        return TreePoint(word[:k], 0.0)
    return TreePoint(word[:k], off)


class RegularTree:
    """The d-regular tree, d >= 3 (a 2-regular tree is the Euclidean line)."""

    limit_ratio = 2.0
    limit_window = 5
    max_ray_param = 2.0 ** 12

    def __init__(self, degree: int = 3):
        if not 3 <= degree <= 10:
            raise DomainError("tree degree must be between 3 and 10")
        self.degree = int(degree)
        self._alphabet = "0123456789"[: self.degree]

    def __repr__(self):
        return f"RegularTree({self.degree})"

    def __eq__(self, other):
        return isinstance(other, RegularTree) and other.degree == self.degree

    def __hash__(self):
        return hash(("tree", self.degree))

    def describe(self) -> str:
        return f"tree:{self.degree}"

    # -- points and boundary points ------------------------------------

    def _check_word(self, word: str, what: str) -> None:
        if any(ch not in self._alphabet for ch in word):
            raise DomainError(f"{what} uses letters outside 0..{self.degree - 1}")
        if not _is_reduced(word):
            raise DomainError(f"{what} {word!r} is not reduced")

    def check_point(self, p) -> TreePoint:
        if not isinstance(p, TreePoint):
            raise DomainError(f"expected TreePoint, got {type(p).__name__}")
        self._check_word(p.word, "vertex address")
        if not 0.0 <= p.offset < 1.0 + OFFSET_TOL:
            raise DomainError(f"edge offset {p.offset} outside [0, 1]")
        if p.offset >= 1.0 - OFFSET_TOL and p.offset <= 1.0 + OFFSET_TOL and p.offset != 0.0:
            # offset 1 is the parent vertex; use the canonical form
            return TreePoint(p.word[:-1], 0.0)
        if p.word == "" and p.offset != 0.0:
            raise DomainError("the root has no parent edge")
        return p

    def point(self, word: str, offset: float = 0.0) -> TreePoint:
        return self.check_point(TreePoint(word, float(offset)))

    def check_end(self, xi) -> TreeEnd:
        if not isinstance(xi, TreeEnd):
            raise DomainError(f"expected TreeEnd, got {type(xi).__name__}")
        if len(xi.period) == 0:
            raise DomainError("tree end needs a nonempty period")
        self._check_word(xi.preperiod, "end preperiod")
        self._check_word(xi.period, "end period")
        if not _is_reduced(xi.preperiod + xi.period + xi.period):
            raise DomainError(f"end {xi} is not a reduced infinite word")
        return xi

    def point_eq(self, p, q, tol: float = OFFSET_TOL) -> bool:
        p = self.check_point(p)
        q = self.check_point(q)
        if p.word == q.word:
            return abs(p.offset - q.offset) <= tol
        # near-vertex points on adjacent edges compare equal at tolerance
        return self.dist(p, q) <= tol

    def end_eq(self, a, b, tol: float = 0.0) -> bool:
        a = self.check_end(a)
        b = self.check_end(b)
        n = len(a.preperiod) + len(b.preperiod) + 2 * len(a.period) * len(b.period)
        return a.prefix(n) == b.prefix(n)

    # -- metric and geodesics ------------------------------------------

    def dist(self, x, y) -> float:
        x = self.check_point(x)
        y = self.check_point(y)
        cpl = _common_prefix_len(x.word, y.word)
        meet = min(float(cpl), x.depth, y.depth)
        return (x.depth - meet) + (y.depth - meet)

    def dist_pairs(self, xs, ys) -> np.ndarray:
        return np.array([self.dist(x, y) for x, y in zip(xs, ys)])

    def geodesic(self, x, y) -> TreeSegment:
        x = self.check_point(x)
        y = self.check_point(y)
        cpl = _common_prefix_len(x.word, y.word)
        meet = min(float(cpl), x.depth, y.depth)
        d = (x.depth - meet) + (y.depth - meet)
        if d == 0.0:
            raise DegenerateSegmentError("geodesic endpoints coincide")
        return TreeSegment(self, x, y, meet, d)

    def ray(self, x, xi) -> TreeRay:
        x = self.check_point(x)
        xi = self.check_end(xi)
        meet = min(float(_common_prefix_len(x.word, xi)), x.depth)
        return TreeRay(self, x, xi, meet)

    def line(self, x, xi) -> TreeLine:
        """Complete geodesic through x with forward end xi (eval(0) = x).

        The backward end is chosen deterministically: walk one step past x
        away from xi, then extend by always appending the smallest letter
        that keeps the word reduced and does not re-enter the forward
        direction.
        """
        x = self.check_point(x)
        xi = self.check_end(xi)
        meet = min(float(_common_prefix_len(x.word, xi)), x.depth)
        if meet < x.depth:
            # forward ascends from x; backward descends through x's vertex
            anchor = x.word
            banned = {anchor[-1]} if anchor else set()
        else:
            # x lies on the xi-path; branch off just above/below it
            k = int(math.ceil(x.depth - OFFSET_TOL))
            if x.offset > OFFSET_TOL:
                # mid-edge: backward passes the parent vertex and turns
                anchor = xi.prefix(k)[:-1]
                banned = {xi.letter(k - 1)}
                if anchor:
                    banned.add(anchor[-1])
            else:
                # vertex on the path: branch at x itself
                anchor = xi.prefix(k)
                banned = {xi.letter(k)}
                if anchor:
                    banned.add(anchor[-1])
        first = next(ch for ch in self._alphabet if ch not in banned)
        second = next(ch for ch in self._alphabet if ch != first)
        third = next(ch for ch in self._alphabet if ch != second)
        eta = TreeEnd(anchor + first, second + third)
        return self._line_between(eta, xi, anchor_point=x)

    def line_between_ends(self, eta: TreeEnd, xi: TreeEnd) -> TreeLine:
        return self._line_between(eta, xi, anchor_point=None)

    def _line_between(self, eta: TreeEnd, xi: TreeEnd,
                      anchor_point: TreePoint | None) -> TreeLine:
        eta = self.check_end(eta)
        xi = self.check_end(xi)
        n = len(eta.preperiod) + len(xi.preperiod) \
            + 2 * len(eta.period) * len(xi.period) + 2
        pe, px = eta.prefix(n), xi.prefix(n)
        branch = _common_prefix_len(pe, px)
        if branch >= n:
            raise DomainError("line endpoints are the same end")
        line = TreeLine(self, xi, eta, branch)
        if anchor_point is not None:
            line = line.shifted(line._raw_param_of(anchor_point))
        return line

    # -- Busemann -------------------------------------------------------

    def busemann(self, xi, x, y) -> float:
        """b_xi(x, y) = d(x, m) - d(y, m) for m on the xi-ray past both
        projections; exact in this model."""
        xi = self.check_end(xi)
        x = self.check_point(x)
        y = self.check_point(y)
        n = max(_common_prefix_len(x.word, xi), _common_prefix_len(y.word, xi)) + 2
        m = TreePoint(xi.prefix(n), 0.0)
        return self.dist(x, m) - self.dist(y, m)

    def busemann_many(self, xi, x, ys) -> np.ndarray:
        return np.array([self.busemann(xi, x, y) for y in ys])

    # -- sampling helpers (tests and harness) ---------------------------

    def random_word(self, rng: np.random.Generator, max_len: int = 6) -> str:
        n = int(rng.integers(0, max_len + 1))
        word = []
        for _ in range(n):
            choices = [c for c in self._alphabet if not word or c != word[-1]]
            word.append(choices[int(rng.integers(0, len(choices)))])
        return "".join(word)

    def random_point(self, rng: np.random.Generator, max_len: int = 6) -> TreePoint:
        word = self.random_word(rng, max_len)
        if word and rng.random() < 0.5:
            return TreePoint(word, float(rng.uniform(0.0, 0.999)))
        return TreePoint(word, 0.0)

    def random_end(self, rng: np.random.Generator) -> TreeEnd:
        while True:
            pre = self.random_word(rng, 3)
            per = self.random_word(rng, 3)
            if not per:
                continue
            cand = TreeEnd(pre, per)
            try:
                return self.check_end(cand)
            except DomainError:
                continue
