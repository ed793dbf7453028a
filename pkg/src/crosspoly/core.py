"""Basic objects for working with the cross-polytope B_1^n = {x : sum |x_i| <= 1}.

Lines are stored in a canonical form (foot of the perpendicular from the
origin plus an oriented unit direction) so the distance to the origin is a
stored quantity rather than something recomputed downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

# exact-identity checks
EPS_IDENTITY = 1e-12
# formula-vs-geometry comparisons
EPS_GEOMETRY = 1e-9


class CrossPolytopeError(ValueError):
    """Base class for invalid inputs."""


class DegenerateInputError(CrossPolytopeError):
    pass


class RegimeError(CrossPolytopeError):
    """Raised when a formula is asked for outside the range where it holds."""


class ConditioningError(CrossPolytopeError):
    pass


def as_point(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise CrossPolytopeError(f"{name} must be a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise CrossPolytopeError(f"{name} has non-finite entries")
    return arr


def check_unit(v: np.ndarray, name: str = "vector", tol: float = EPS_IDENTITY) -> None:
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise CrossPolytopeError(f"{name} must have unit length (got |{name}| = {norm!r})")


def l1_norm(x) -> float:
    """Sum of absolute coordinates; ``x`` lies in B_1^n iff this is <= 1."""
    return float(np.sum(np.abs(as_point(x))))


def body_volume(n: int) -> float:
    """Volume 2^n / n! of B_1^n."""
    return 2.0**n / math.factorial(n)


def unit_vector(n: int, i: int, sign: float = 1.0) -> np.ndarray:
    e = np.zeros(n)
    e[i] = sign
    return e


@dataclass(frozen=True)
class LineSpec:
    """A line in R^n, kept canonical: ``base`` is orthogonal to ``direction``."""

    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        base = as_point(self.base, "base")
        direction = as_point(self.direction, "direction")
        if base.shape != direction.shape:
            raise CrossPolytopeError("base and direction must have equal length")
        check_unit(direction, "direction")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", direction)

    @property
    def dim(self) -> int:
        return self.base.size

    @property
    def distance(self) -> float:
        """Euclidean distance from the origin (|base| for a canonical line)."""
        return float(np.linalg.norm(self.base))

    def point(self, s: float) -> np.ndarray:
        return self.base + s * self.direction

    @classmethod
    def through(cls, p1, p2) -> "LineSpec":
        return canonicalize_line(p1, p2)

    def to_dict(self) -> dict:
        return {"base": self.base.tolist(), "direction": self.direction.tolist()}


@dataclass(frozen=True)
class HyperplaneSpec:
    """The hyperplane {x : <normal, x> = offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        normal = as_point(self.normal, "normal")
        check_unit(normal, "normal")
        if not math.isfinite(self.offset) or self.offset < 0:
            raise CrossPolytopeError("offset must be a finite number >= 0")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return self.normal.size

    @classmethod
    def from_normal(cls, normal, offset: float) -> "HyperplaneSpec":
        """Build from a not necessarily normalized normal vector."""
        v = as_point(normal, "normal")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise DegenerateInputError("normal must be nonzero")
        return cls(v / norm, offset)

    def to_dict(self) -> dict:
        return {"normal": self.normal.tolist(), "offset": self.offset}


@dataclass(frozen=True)
class SlabSpec:
    """The symmetric slab {x : |<normal, x>| <= half_width}."""

    normal: np.ndarray
    half_width: float

    def __post_init__(self):
        normal = as_point(self.normal, "normal")
        check_unit(normal, "normal")
        if not math.isfinite(self.half_width) or self.half_width <= 0:
            raise CrossPolytopeError("half_width must be positive")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def dim(self) -> int:
        return self.normal.size

    @classmethod
    def from_normal(cls, normal, half_width: float) -> "SlabSpec":
        v = as_point(normal, "normal")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise DegenerateInputError("normal must be nonzero")
        return cls(v / norm, half_width)

    def to_dict(self) -> dict:
        return {"normal": self.normal.tolist(), "half_width": self.half_width}


Witness = Union[LineSpec, HyperplaneSpec, SlabSpec]

METHODS = ("closed-form", "exact-geometry", "monte-carlo", "search")


@dataclass(frozen=True)
class SectionResult:
    """A computed length or volume together with how it was obtained."""

    value: float
    method: str
    witness: Optional[Witness] = None
    tangent: bool = False
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise CrossPolytopeError(f"unknown method tag {self.method!r}")
        if not self.value >= 0:
            raise CrossPolytopeError(f"section value must be >= 0, got {self.value!r}")

    def __float__(self) -> float:
        return float(self.value)


def line_distance_to_origin(p1, p2) -> float:
    """Distance from the origin to the line through two distinct points.

    Uses sqrt(|a|^2 |b|^2 - <a,b>^2) / |a - b|.  The radicand is evaluated
    through Lagrange's identity as sum_{i<j} (a_i b_j - a_j b_i)^2, which
    avoids the cancellation of the direct form for lines near the origin.
    """
    a = as_point(p1, "p1")
    b = as_point(p2, "p2")
    if a.shape != b.shape:
        raise CrossPolytopeError("points must have equal dimension")
    diff = np.linalg.norm(a - b)
    if diff == 0:
        raise DegenerateInputError("points must be distinct")
    minors = np.outer(a, b)
    minors = minors - minors.T
    return math.sqrt(0.5 * float(np.sum(minors * minors))) / diff


def _orient(direction: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(direction)
    if direction[nz[0]] < 0:
        direction = -direction
    # adding 0.0 turns -0.0 into 0.0
    return direction + 0.0


def canonicalize_line(first, second=None, *, direction=None) -> LineSpec:
    """Canonical form of a line given by two points or by a point and a direction.

    Either ``canonicalize_line(p1, p2)``, ``canonicalize_line(p, direction=d)``
    or ``canonicalize_line(line)`` for an existing :class:`LineSpec`.  The
    direction is normalized and oriented so its first nonzero coordinate is
    positive; the base is the foot of the perpendicular from the origin.
    """
    if isinstance(first, LineSpec):
        p, d = first.base, first.direction
    elif direction is not None:
        p = as_point(first, "point")
        d = as_point(direction, "direction")
    else:
        if second is None:
            raise CrossPolytopeError("need two points or a point and a direction")
        p = as_point(first, "p1")
        q = as_point(second, "p2")
        if p.shape != q.shape:
            raise CrossPolytopeError("dimension mismatch")
        d = q - p
    if p.shape != d.shape:
        raise CrossPolytopeError("dimension mismatch")
    norm = np.linalg.norm(d)
    if norm == 0:
        raise DegenerateInputError("line needs two distinct points / nonzero direction")
    d = _orient(d / norm)
    base = p - (p @ d) * d + 0.0
    return LineSpec(base, d)


def project_qk(x, k: int) -> np.ndarray:
    """Orthogonal projection onto span{u_k, v_k}.

    The first ``k`` coordinates are replaced by their mean, the remaining
    ``n - k`` by theirs.
    """
    x = as_point(x)
    n = x.size
    if not 1 <= k <= n - 1:
        raise CrossPolytopeError(f"k must lie in 1..{n - 1}, got {k}")
    out = np.empty(n)
    out[:k] = x[:k].mean()
    out[k:] = x[k:].mean()
    return out
