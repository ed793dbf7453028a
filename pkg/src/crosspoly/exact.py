"""Exact section lengths and volumes.

Nothing in here samples or searches: lines are clipped against B_1^n by
walking the breakpoints of the piecewise-linear function s -> |p + s d|_1,
and hyperplane / slab volumes use the chopped-pyramid formula, valid when
the hyperplane is farther than 1/sqrt(2) from the origin and so separates a
single vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    EPS_IDENTITY,
    ConditioningError,
    CrossPolytopeError,
    HyperplaneSpec,
    LineSpec,
    RegimeError,
    SectionResult,
    SlabSpec,
    as_point,
    body_volume,
    canonicalize_line,
    check_unit,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _check_dim(n: Optional[int], actual: int) -> int:
    if n is not None and n != actual:
        raise CrossPolytopeError(f"expected dimension {n}, got {actual}")
    return actual


def clip_line(base, direction, tol: float = EPS_IDENTITY):
    """Parameter interval {s : |base + s*direction|_1 <= 1}.

    Returns ``(s_lo, s_hi, f_min)`` or ``None`` when the line misses the body
    by more than ``tol``.  ``f_min`` is the minimum of the l1 norm along the
    line, so ``f_min`` within ``tol`` of 1 means the line only touches.

    Plain Python on purpose: for the small n used here it is several times
    faster than numpy, and the searches call it hundreds of thousands of times.
    """
    b = base.tolist() if isinstance(base, np.ndarray) else list(base)
    d = direction.tolist() if isinstance(direction, np.ndarray) else list(direction)
    bp = sorted(-bi / di for bi, di in zip(b, d) if di != 0.0)
    # f at every breakpoint, O(n^2) but exact up to rounding
    f_bp = [sum(abs(bi + s * di) for bi, di in zip(b, d)) for s in bp]
    f_min = min(f_bp)
    i_min = f_bp.index(f_min)
    if f_min > 1.0 + tol:
        return None
    if f_min >= 1.0 - tol:
        # touches the boundary; a flat piece at level 1 (line inside a facet
        # hyperplane) has breakpoints at both of its ends
        on = [s for s, f in zip(bp, f_bp) if f <= 1.0 + tol]
        return on[0], on[-1], f_min
    slope = sum(abs(di) for di in d)
    last = len(bp) - 1

    # walk right from the minimizer to the piece where f crosses 1
    j = i_min + 1
    while j <= last and f_bp[j] < 1.0:
        j += 1
    if j > last:
        s_hi = bp[last] + (1.0 - f_bp[last]) / slope
    else:
        s0, s1, f0, f1 = bp[j - 1], bp[j], f_bp[j - 1], f_bp[j]
        s_hi = s0 + (1.0 - f0) * (s1 - s0) / (f1 - f0)

    j = i_min - 1
    while j >= 0 and f_bp[j] < 1.0:
        j -= 1
    if j < 0:
        s_lo = bp[0] - (1.0 - f_bp[0]) / slope
    else:
        s0, s1, f0, f1 = bp[j + 1], bp[j], f_bp[j + 1], f_bp[j]
        s_lo = s0 + (1.0 - f0) * (s1 - s0) / (f1 - f0)
    return s_lo, s_hi, f_min


def chord_length(base: np.ndarray, direction: np.ndarray) -> float:
    """Length of B_1^n ∩ {base + s*direction}; ``direction`` need not be unit."""
    clip = clip_line(base, direction)
    if clip is None:
        return 0.0
    return (clip[1] - clip[0]) * math.sqrt(float(np.dot(direction, direction)))


def line_section_length(line: LineSpec, n: Optional[int] = None) -> SectionResult:
    """Length of the intersection of ``line`` with B_1^n.

    Lines touching the body in a single point give length 0 with
    ``tangent=True``.
    """
    if not isinstance(line, LineSpec):
        line = canonicalize_line(line)
    _check_dim(n, line.dim)
    clip = clip_line(line.base, line.direction)
    if clip is None:
        return SectionResult(0.0, "exact-geometry", witness=line)
    s_lo, s_hi, f_min = clip
    if s_lo == s_hi:
        return SectionResult(0.0, "exact-geometry", witness=line, tangent=True)
    return SectionResult(
        s_hi - s_lo,
        "exact-geometry",
        witness=line,
        notes={"endpoints": (line.point(s_lo).tolist(), line.point(s_hi).tolist())},
    )


@dataclass(frozen=True)
class VertexFrame:
    """Coordinates in which the separated vertex of B_1^n is e_1.

    ``index`` and ``sign`` say which vertex ``sign * e_index`` is cut off;
    ``canonical`` is the normal permuted so that entry sits first, made
    positive, with the remaining entries kept in their original order.
    """

    index: int
    sign: float
    canonical: np.ndarray

    def to_original(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        order = self.order
        out = np.empty_like(x)
        out[order] = x
        out[self.index] *= self.sign
        return out

    @property
    def order(self) -> np.ndarray:
        n = self.canonical.size
        return np.array([self.index] + [i for i in range(n) if i != self.index])


def vertex_frame(normal) -> VertexFrame:
    a = as_point(normal, "normal")
    i = int(np.argmax(np.abs(a)))
    sign = 1.0 if a[i] >= 0 else -1.0
    order = [i] + [j for j in range(a.size) if j != i]
    canonical = a[order].copy()
    canonical[0] *= sign
    return VertexFrame(i, sign, canonical)


def _hyperplane_regime(n: int, t: float) -> None:
    if n < 3:
        raise RegimeError("hyperplane and slab formulas need n >= 3")
    if not t > INV_SQRT2:
        raise RegimeError(
            f"offset {t!r} <= 1/sqrt(2): more than one vertex can be cut off, "
            "use the Monte Carlo oracle instead"
        )
    if t > 1.0:
        raise RegimeError(f"offset {t!r} > 1: hyperplane misses B_1^n")


def _denominator(a: np.ndarray) -> float:
    a1 = a[0]
    gaps = a1 * a1 - a[1:] ** 2
    if np.any(gaps <= EPS_IDENTITY):
        raise ConditioningError(
            "a_1^2 - a_i^2 is too small; the normal ties with the separated vertex"
        )
    return float(np.prod(gaps))


def chopped_volume(normal, t: float) -> float:
    """Volume of the cap S = B_1^n ∩ {<x, a> >= t} for 1/sqrt(2) < t <= 1.

    |S| = 2^(n-1) (a_1 - t)^n a_1^(n-2) / (n! prod_{i>=2} (a_1^2 - a_i^2))
    in the frame where the separated vertex is e_1.
    """
    a = as_point(normal, "normal")
    check_unit(a, "normal")
    n = a.size
    _hyperplane_regime(n, t)
    a = vertex_frame(a).canonical
    a1 = a[0]
    if a1 - t <= EPS_IDENTITY:
        return 0.0
    return float(
        2.0 ** (n - 1)
        * (a1 - t) ** n
        * a1 ** (n - 2)
        / (math.factorial(n) * _denominator(a))
    )


def hyperplane_section_volume(h: HyperplaneSpec, n: Optional[int] = None) -> SectionResult:
    """(n-1)-volume of B_1^n ∩ {<x, a> = t} for 1/sqrt(2) < t <= 1."""
    n = _check_dim(n, h.dim)
    t = h.offset
    _hyperplane_regime(n, t)
    frame = vertex_frame(h.normal)
    a = frame.canonical
    a1 = a[0]
    if a1 < t - EPS_IDENTITY:
        return SectionResult(0.0, "exact-geometry", witness=h)
    if a1 - t <= EPS_IDENTITY:
        return SectionResult(0.0, "exact-geometry", witness=h, tangent=True)
    value = float(
        2.0 ** (n - 1)
        / math.factorial(n - 1)
        * a1 ** (n - 2)
        * (a1 - t) ** (n - 1)
        / _denominator(a)
    )
    return SectionResult(
        value,
        "exact-geometry",
        witness=h,
        notes={"separated_vertex": (frame.index, frame.sign)},
    )


def slab_volume(s: SlabSpec, n: Optional[int] = None) -> SectionResult:
    """Volume of B_1^n ∩ {|<x, a>| <= t}, via |B_1^n| - 2|S|."""
    n = _check_dim(n, s.dim)
    _hyperplane_regime(n, s.half_width)
    value = body_volume(n) - 2.0 * chopped_volume(s.normal, s.half_width)
    return SectionResult(value, "exact-geometry", witness=s)


def simplex_central_line_length(v) -> float:
    """Length of S_n ∩ (z + R v) for the regular simplex S_n = conv{e_1..e_n}.

    ``v`` is a unit vector with zero coordinate sum and z is the centroid.
    """
    v = as_point(v, "v")
    check_unit(v, "v")
    if abs(v.sum()) > EPS_IDENTITY:
        raise CrossPolytopeError("direction must lie in the simplex hyperplane (sum v_i = 0)")
    n = v.size
    return (1.0 / v.max() - 1.0 / v.min()) / n


def simplex_chord_through_centroid(x) -> float:
    """Length of the chord of S_n from the boundary point ``x`` through the centroid.

    ``x`` must lie on the facet conv{e_1, ..., e_{n-1}}.
    """
    x = as_point(x, "x")
    n = x.size
    if n < 3:
        raise CrossPolytopeError("need n >= 3")
    if x[-1] != 0 or np.any(x < 0) or abs(x.sum() - 1.0) > EPS_IDENTITY:
        raise CrossPolytopeError("x must be in conv{e_1, ..., e_(n-1)}")
    m = x[:-1].max()
    if abs(n * m - 1.0) <= EPS_IDENTITY:
        raise CrossPolytopeError("max x_i = 1/n: the chord is undefined")
    radial = math.sqrt(float(np.sum((1.0 / n - x[:-1]) ** 2)) + 1.0 / n**2)
    return (1.0 + 1.0 / (n * m - 1.0)) * radial


def _isosceles_check(u: float, v: float, t: float) -> float:
    if not (u > 0 and v > 0):
        raise CrossPolytopeError("u and v must be positive")
    t_max = u * v / math.hypot(u, v)
    if not 0 <= t <= t_max + EPS_IDENTITY:
        raise CrossPolytopeError(f"t must lie in [0, {t_max!r}], got {t!r}")
    return t_max


def isosceles_min_chord(u: float, v: float, t: float) -> float:
    """Shortest segment at distance ``t`` from 0 with ends on the legs of conv{±u e1, v e2}.

    The minimizer is parallel to the base and has length 2 (v - t) u / v.
    """
    _isosceles_check(u, v, t)
    return 2.0 * (v - t) * u / v


def isosceles_tilted_chord(u: float, v: float, t: float, theta: float) -> float:
    """Length of the same kind of segment when its normal is tilted by ``theta``.

    ``theta`` must lie in [0, pi/2 - alpha), alpha being the half apex angle.
    """
    _isosceles_check(u, v, t)
    alpha = math.atan2(u, v)
    if not 0 <= theta < math.pi / 2 - alpha:
        raise CrossPolytopeError("theta out of range")
    ca, sa, ct = math.cos(alpha), math.sin(alpha), math.cos(theta)
    return 2.0 * (v * ct - t) * sa * ca / (ca * ca + ct * ct - 1.0)
