"""Busemann calculus, horosphere slice charts, and distortion experiments
on products of locally compact Hadamard model spaces."""

from .busemann import busemann_limit
from .errors import (
    ArityError,
    ConvergenceError,
    DegenerateSegmentError,
    DomainError,
    GeometryError,
    InvalidSliceError,
    NetConnectivityError,
    NoPathError,
    NotInSliceError,
    SpecSyntaxError,
    UsageError,
)
from .euclidean import EuclideanSpace
from .hyperbolic import HyperbolicPlane
from .products import (
    BoundaryDirection,
    ProductPoint,
    ProductSpace,
    check_slope,
    classify_direction,
)
from .slices import (
    Base,
    ChartPoint,
    Full,
    Horosphere,
    LineFactor,
    Slice,
    SliceSpec,
    make_slice,
    project_along_horospheres,
)
from .trees import RegularTree, TreeEnd, TreePoint

__all__ = [
    "ArityError",
    "Base",
    "BoundaryDirection",
    "ChartPoint",
    "ConvergenceError",
    "DegenerateSegmentError",
    "DomainError",
    "EuclideanSpace",
    "Full",
    "GeometryError",
    "Horosphere",
    "HyperbolicPlane",
    "InvalidSliceError",
    "LineFactor",
    "NetConnectivityError",
    "NoPathError",
    "NotInSliceError",
    "ProductPoint",
    "ProductSpace",
    "RegularTree",
    "Slice",
    "SliceSpec",
    "SpecSyntaxError",
    "TreeEnd",
    "TreePoint",
    "UsageError",
    "busemann_limit",
    "check_slope",
    "classify_direction",
    "make_slice",
    "project_along_horospheres",
]
