"""Parser for the space-spec mini-language used by the CLI.

    h2*h2*r theta=0.6,0.8,0 xi1=inf xi2=0

One whitespace-separated token names the product (factors joined by "*":
"h2", "r", or "tree[:degree]"), one token carries the slope ("theta="
comma-list, normalized when within 1e-6 of unit norm), and one "xi<i>="
clause per active factor names its boundary point:

    h2:    "inf" or a real number
    r:     "+" or "-"
    tree:  "<preperiod>(<period>)", e.g. "0(12)" or "(01)"

Errors carry the byte offset of the offending token.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SpecSyntaxError
from .euclidean import EuclideanSpace
from .hyperbolic import HyperbolicPlane
from .products import BoundaryDirection, ProductSpace
from .trees import RegularTree, TreeEnd

NORM_TOL = 1e-6
_TREE_END = re.compile(r"^([0-9]*)\(([0-9]+)\)$")


@dataclass(frozen=True)
class ParsedSpec:
    space: ProductSpace
    direction: BoundaryDirection

    def __eq__(self, other):
        if not isinstance(other, ParsedSpec):
            return NotImplemented
        if self.space.factors != other.space.factors:
            return False
        if not np.array_equal(self.direction.slope, other.direction.slope):
            return False
        for f, a, b in zip(self.space.factors, self.direction.ends,
                           other.direction.ends):
            if (a is None) != (b is None):
                return False
            if a is not None and not f.end_eq(a, b, tol=0.0):
                return False
        return True


def _parse_factor(text: str, offset: int):
    if text == "h2":
        return HyperbolicPlane()
    if text == "r":
        return EuclideanSpace(1)
    if text == "tree":
        return RegularTree(3)
    if text.startswith("tree:"):
        try:
            degree = int(text[5:])
        except ValueError:
            raise SpecSyntaxError(f"bad tree degree {text[5:]!r}", offset)
        try:
            return RegularTree(degree)
        except DomainError as exc:
            raise SpecSyntaxError(str(exc), offset)
    raise SpecSyntaxError(f"unknown factor {text!r}", offset)


def _parse_end(factor, text: str, offset: int):
    if isinstance(factor, HyperbolicPlane):
        if text == "inf":
            return math.inf
        try:
            return float(text)
        except ValueError:
            raise SpecSyntaxError(
                f"h2 endpoint must be a real number or 'inf', got {text!r}",
                offset)
    if isinstance(factor, EuclideanSpace):
        if text == "+":
            return np.array([1.0])
        if text == "-":
            return np.array([-1.0])
        raise SpecSyntaxError(f"r endpoint must be '+' or '-', got {text!r}",
                              offset)
    m = _TREE_END.match(text)
    if not m:
        raise SpecSyntaxError(
            f"tree endpoint must look like 'pre(period)', got {text!r}", offset)
    try:
        return factor.check_end(TreeEnd(m.group(1), m.group(2)))
    except DomainError as exc:
        raise SpecSyntaxError(str(exc), offset)


def parse_space_spec(text: str) -> ParsedSpec:
    if not text.strip():
        raise SpecSyntaxError("empty space spec", 0)
    tokens = [(m.start(), m.group(0)) for m in re.finditer(r"\S+", text)]

    off0, product = tokens[0]
    factors = []
    at = off0
    for part in product.split("*"):
        if not part:
            raise SpecSyntaxError("empty factor name", at)
        factors.append(_parse_factor(part, at))
        at += len(part) + 1
    space = ProductSpace(factors)

    theta = None
    theta_off = None
    ends: dict[int, tuple[int, str]] = {}
    for off, tok in tokens[1:]:
        if tok.startswith("theta="):
            if theta is not None:
                raise SpecSyntaxError("duplicate theta clause", off)
            body = tok[len("theta="):]
            vals = []
            sub = off + len("theta=")
            for item in body.split(","):
                try:
                    vals.append(float(item))
                except ValueError:
                    raise SpecSyntaxError(f"bad slope entry {item!r}", sub)
                sub += len(item) + 1
            theta = np.array(vals)
            theta_off = off
            continue
        m = re.match(r"^xi([0-9]+)=(.*)$", tok)
        if m:
            idx = int(m.group(1))
            if not 1 <= idx <= space.arity:
                raise SpecSyntaxError(
                    f"xi index {idx} out of range 1..{space.arity}", off)
            if idx - 1 in ends:
                raise SpecSyntaxError(f"duplicate endpoint for factor {idx}", off)
            ends[idx - 1] = (off, m.group(2))
            continue
        raise SpecSyntaxError(f"unrecognized clause {tok!r}", off)

    if theta is None:
        raise SpecSyntaxError("missing theta clause", len(text))
    if theta.size != space.arity:
        raise SpecSyntaxError(
            f"theta has {theta.size} entries for {space.arity} factors",
            theta_off)
    if np.any(theta < 0.0):
        raise SpecSyntaxError("slope entries must be nonnegative", theta_off)
    norm = float(np.linalg.norm(theta))
    if abs(norm - 1.0) > NORM_TOL:
        raise SpecSyntaxError(
            f"theta must have unit norm (within {NORM_TOL:g}), got {norm!r}",
            theta_off)
    theta = theta / norm

    resolved: list = [None] * space.arity
    for i in range(space.arity):
        if theta[i] > 0.0:
            if i not in ends:
                raise SpecSyntaxError(
                    f"missing endpoint xi{i + 1}= for active factor", len(text))
            off, body = ends[i]
            resolved[i] = _parse_end(space.factors[i], body, off)
        elif i in ends:
            off, _ = ends[i]
            raise SpecSyntaxError(
                f"factor {i + 1} has theta_i = 0 and takes no endpoint", off)

    direction = BoundaryDirection(theta, tuple(resolved))
    return ParsedSpec(space, space.check_direction(direction))


def _format_end(factor, end) -> str:
    if isinstance(factor, HyperbolicPlane):
        return "inf" if math.isinf(end) else f"{end:.17g}"
    if isinstance(factor, EuclideanSpace):
        return "+" if float(np.atleast_1d(end)[0]) > 0 else "-"
    return f"{end.preperiod}({end.period})"


def pretty_print(spec: ParsedSpec) -> str:
    parts = [spec.space.describe()]
    parts.append("theta=" + ",".join(f"{t:.17g}" for t in spec.direction.slope))
    for i, end in enumerate(spec.direction.ends):
        if end is not None:
            parts.append(f"xi{i + 1}=" + _format_end(spec.space.factors[i], end))
    return " ".join(parts)
