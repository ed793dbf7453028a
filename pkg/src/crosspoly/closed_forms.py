"""Extremal section sizes of B_1^n as explicit functions of (n, t).

Every answer comes with a geometric witness (a line or hyperplane) that
realizes the value, so callers can re-evaluate it with :mod:`crosspoly.exact`
instead of trusting the formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import (
    EPS_IDENTITY,
    CrossPolytopeError,
    HyperplaneSpec,
    LineSpec,
    RegimeError,
    SlabSpec,
    Witness,
    body_volume,
    canonicalize_line,
    unit_vector,
)
from .exact import INV_SQRT2, isosceles_min_chord


@dataclass(frozen=True)
class ExtremalAnswer:
    value: float
    branch: str
    witness: Witness


@dataclass(frozen=True)
class ThresholdTable:
    """Breakpoints T_n(0) > T_n(1) > ... > T_n(n-1) of the minimal line length."""

    n: int
    values: Tuple[float, ...]

    def __getitem__(self, k: int) -> float:
        return self.values[k]

    def branch_for(self, t: float) -> int:
        """Index k with t in [T_n(k), T_n(k-1)); ``n`` means t < T_n(n-1)."""
        for k in range(1, self.n):
            if t >= self.values[k]:
                return k
        return self.n


def threshold(n: int, k: int) -> float:
    if not 0 <= k <= n - 1:
        raise CrossPolytopeError(f"k must lie in 0..{n - 1}")
    num = math.sqrt((k + 1) * (n - k)) + math.sqrt(k * (n - k - 1))
    return num / (n * (math.sqrt(k) + math.sqrt(k + 1)))


def threshold_table(n: int) -> ThresholdTable:
    _check_n(n, 2)
    return ThresholdTable(n, tuple(threshold(n, k) for k in range(n)))


@dataclass(frozen=True)
class DiamondData:
    """The plane spanned by u_k and v_k, onto which B_1^n projects as a diamond."""

    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n - 1:
            raise CrossPolytopeError(f"k must lie in 1..{self.n - 1}")

    @property
    def u(self) -> np.ndarray:
        u = np.zeros(self.n)
        u[: self.k] = 1.0 / self.k
        return u

    @property
    def v(self) -> np.ndarray:
        v = np.zeros(self.n)
        v[self.k :] = 1.0 / (self.n - self.k)
        return v

    @property
    def u_norm(self) -> float:
        return 1.0 / math.sqrt(self.k)

    @property
    def v_norm(self) -> float:
        return 1.0 / math.sqrt(self.n - self.k)


def _check_n(n: int, least: int) -> None:
    if int(n) != n or n < least:
        raise CrossPolytopeError(f"dimension must be an integer >= {least}, got {n!r}")


def _check_t(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise CrossPolytopeError(f"t must lie in [0, 1], got {t!r}")


def _check_hyp_t(t: float) -> None:
    if not INV_SQRT2 < t <= 1.0:
        raise RegimeError(f"t must lie in (1/sqrt(2), 1], got {t!r}")


def _plane_line(n: int, base2, dir2) -> LineSpec:
    base = np.zeros(n)
    d = np.zeros(n)
    base[:2] = base2
    d[:2] = dir2
    return canonicalize_line(base, direction=d)


def max_line_length(n: int, t: float) -> ExtremalAnswer:
    """Longest chord of B_1^n among lines at distance ``t`` from the origin.

    The optimal line always lies in span{e_1, e_2}:

    * t <= 1/sqrt(2): it passes through the vertex e_1 and crosses the
      opposite edge, length 2 / (t + sqrt(1 - t^2));
    * 1/sqrt(2) < t <= 3/4: it cuts the corner at e_1 with the normal
      (c, sqrt(1 - c^2)), c = t + sqrt(t^2 - 1/2), length t - sqrt(t^2 - 1/2);
    * t > 3/4: it is perpendicular to e_1, length 2 - 2t.
    """
    _check_n(n, 2)
    _check_t(t)
    if t <= INV_SQRT2:
        c = math.sqrt(1.0 - t * t)
        length = 2.0 / (t + c)
        far = np.array([1.0 - length * c, length * t])
        line = _plane_line(n, [1.0, 0.0], far - np.array([1.0, 0.0]))
        return ExtremalAnswer(length, "through-vertex", line)
    if t <= 0.75:
        root = math.sqrt(t * t - 0.5)
        c = min(t + root, 1.0)
        s = math.sqrt(1.0 - c * c)
        line = _plane_line(n, [t * c, t * s], [-s, c])
        return ExtremalAnswer(t - root, "tilted-corner", line)
    line = _plane_line(n, [t, 0.0], [0.0, 1.0])
    return ExtremalAnswer(2.0 - 2.0 * t, "perpendicular-corner", line)


def mk(n: int, k: int, t: float) -> float:
    """Shortest section of the diamond conv{±u_k, ±v_k} by the relevant lines at distance t."""
    _check_n(n, 2)
    if not 1 <= k <= n - 1:
        raise CrossPolytopeError(f"k must lie in 1..{n - 1}")
    if not 0 <= t <= 1.0 / math.sqrt(n) + EPS_IDENTITY:
        raise CrossPolytopeError(f"t must lie in [0, 1/sqrt(n)], got {t!r}")
    return 2.0 * (1.0 - t * math.sqrt(n - k)) / math.sqrt(k)


def mk_via_isosceles(n: int, k: int, t: float) -> float:
    d = DiamondData(n, k)
    return isosceles_min_chord(d.u_norm, d.v_norm, t)


def min_line_length(n: int, t: float) -> ExtremalAnswer:
    """Shortest chord of B_1^n among lines at distance ``t`` from the origin.

    For t > 1/sqrt(n) some such line misses the body and the answer is 0.
    Otherwise the branch is picked from :func:`threshold_table` with
    left-closed intervals [T_n(k), T_n(k-1)).
    """
    _check_n(n, 2)
    _check_t(t)
    inradius = 1.0 / math.sqrt(n)
    ones = np.ones(n)
    if t > inradius + EPS_IDENTITY:
        # parallel to the facet sum x_i = 1 but farther out
        d = np.zeros(n)
        d[0], d[1] = 1.0, -1.0
        line = canonicalize_line(t * ones / math.sqrt(n), direction=d)
        return ExtremalAnswer(0.0, "disjoint", line)
    k = threshold_table(n).branch_for(t)
    a, b = _min_line_points(n, k, t)
    if k == n:
        return ExtremalAnswer(2.0 / math.sqrt(n), "parallel-facets", canonicalize_line(a, b))
    return ExtremalAnswer(mk(n, k, t), f"k={k}", canonicalize_line(a, b))


def _min_line_points(n: int, k: int, t: float):
    if k == n:
        # through the parallel facets sum x_i = 1 and sum x_i = -1
        ones = np.ones(n)
        theta = t * math.sqrt(n * (n - 1))
        a = (1.0 - theta) * ones / n
        a[:-1] += theta / (n - 1)
        return a, a - 2.0 * ones / n
    diamond = DiamondData(n, k)
    theta = t * math.sqrt(n - k)
    a = (1.0 - theta) * diamond.u + theta * diamond.v
    b = -(1.0 - theta) * diamond.u + theta * diamond.v
    return a, b


def min_line_endpoints(n: int, t: float):
    """The two boundary points the minimizing line is drawn through (t <= 1/sqrt(n))."""
    ans = min_line_length(n, t)
    if ans.branch == "disjoint":
        raise RegimeError("t > 1/sqrt(n): the minimum is attained by disjoint lines")
    k = n if ans.branch == "parallel-facets" else int(ans.branch[2:])
    return _min_line_points(n, k, t)


def max_hyperplane_volume(n: int, t: float) -> ExtremalAnswer:
    """Largest (n-1)-volume of B_1^n ∩ H over hyperplanes H at distance t > 1/sqrt(2)."""
    _check_n(n, 3)
    _check_hyp_t(t)
    value = 2.0 ** (n - 1) * (1.0 - t) ** (n - 1) / math.factorial(n - 1)
    return ExtremalAnswer(value, "coordinate-normal", HyperplaneSpec(unit_vector(n, 0), t))


def min_slab_volume(n: int, t: float) -> ExtremalAnswer:
    """Smallest volume of B_1^n ∩ {|<x, a>| <= t} over unit a, for t > 1/sqrt(2)."""
    _check_n(n, 3)
    _check_hyp_t(t)
    value = body_volume(n) * (1.0 - (1.0 - t) ** n)
    return ExtremalAnswer(value, "coordinate-normal", SlabSpec(unit_vector(n, 0), t))


def simplex_extremes(n: int) -> Tuple[float, float]:
    """(min, max) length of central line sections of the regular simplex conv{e_1..e_n}."""
    _check_n(n, 3)
    return 2.0 * math.sqrt(2.0) / n, math.sqrt(n / (n - 1))


def simplex_min_direction(n: int) -> np.ndarray:
    """An edge direction (e_1 - e_2)/sqrt(2); these attain the minimum."""
    v = np.zeros(n)
    v[0], v[1] = 1.0, -1.0
    return v / math.sqrt(2.0)


def simplex_max_direction(n: int) -> np.ndarray:
    """Direction from the centroid towards the vertex e_1; these attain the maximum."""
    v = -np.ones(n)
    v[0] = n - 1.0
    return v / np.linalg.norm(v)
