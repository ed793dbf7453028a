"""Multi-start searches that certify the extremal formulas numerically.

The searches never consult a closed form.  They optimize the exact section
size over an explicit parameterization of the feasible set (every evaluated
line really is at distance t, every evaluated normal really is a unit
vector), so the best value found is always realized by a concrete witness
and can only undershoot a true maximum.

Each start draws from its own PCG64 stream spawned from the config seed,
so a report depends only on (seed, config) and not on evaluation order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from .core import (
    CrossPolytopeError,
    HyperplaneSpec,
    LineSpec,
    SlabSpec,
    Witness,
    canonicalize_line,
)
from .exact import (
    INV_SQRT2,
    chord_length,
    hyperplane_section_volume,
    line_section_length,
    simplex_central_line_length,
    slab_volume,
)
from .montecarlo import make_rng

MODES = ("maximize", "minimize")


@dataclass(frozen=True)
class SearchConfig:
    starts: int = 256
    max_iters: int = 500
    tol: float = 1e-10
    # an int or a tuple of ints, anything SeedSequence accepts
    seed: Union[int, Tuple[int, ...]] = 0
    mode: str = "maximize"
    # best starts that get re-run to full precision
    polish: int = 8

    def __post_init__(self):
        if self.mode not in MODES:
            raise CrossPolytopeError(f"mode must be one of {MODES}")
        if self.starts < 1 or self.max_iters < 1 or self.polish < 0:
            raise CrossPolytopeError("starts and max_iters must be positive")


@dataclass(frozen=True)
class SearchReport:
    best_value: float
    best_witness: Optional[Witness]
    history: Tuple[float, ...]
    mode: str
    evaluations: int
    # largest / smallest value seen at any evaluated feasible point
    extreme_evaluated: float
    closed_form: Optional[float] = None
    notes: dict = field(default_factory=dict)

    @property
    def gap(self) -> Optional[float]:
        """best - closed form; negative means the search fell short of a maximum."""
        if self.closed_form is None:
            return None
        return self.best_value - self.closed_form

    @property
    def certified_gap(self) -> Optional[float]:
        """How far the search falls on the wrong side of the closed form (0 = matched)."""
        if self.closed_form is None:
            return None
        if self.mode == "maximize":
            return self.closed_form - self.best_value
        return self.best_value - self.closed_form

    def with_closed_form(self, value: float) -> "SearchReport":
        return replace(self, closed_form=value)


class _Tracked:
    """Objective wrapper that records evaluations, in a minimization sign convention."""

    def __init__(self, fn, maximize: bool):
        self.fn = fn
        self.sign = -1.0 if maximize else 1.0
        self.count = 0
        self.extreme = -math.inf if maximize else math.inf
        self.maximize = maximize

    def __call__(self, x):
        self.count += 1
        value = self.fn(x)
        if value is None:
            # infeasible parameters are pushed away by a bad objective
            return math.inf
        if self.maximize:
            self.extreme = max(self.extreme, value)
        else:
            self.extreme = min(self.extreme, value)
        return self.sign * value


def _nelder_mead(obj, x0, max_iters, tol, scale):
    n = x0.size
    simplex = np.vstack([x0, x0 + scale * np.eye(n)])
    res = minimize(
        obj,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": max_iters,
            "maxfev": 2 * max_iters,
            "xatol": tol,
            "fatol": tol,
            "initial_simplex": simplex,
            "adaptive": n > 4,
        },
    )
    return res.x, float(res.fun)


def _polish(obj, x, fx, config, rounds: int = 10):
    """Restart Nelder-Mead from the incumbent with shrinking simplices."""
    scale = 0.05
    for _ in range(rounds):
        x_new, f_new = _nelder_mead(obj, x, 4 * config.max_iters, config.tol, scale)
        if f_new < fx - config.tol:
            x, fx = x_new, f_new
        else:
            scale *= 0.1
            if scale < 1e-8:
                break
    return x, fx


def multistart(
    objective: Callable[[np.ndarray], Optional[float]],
    sample_start: Callable[[np.random.Generator], np.ndarray],
    to_witness: Callable[[np.ndarray], Witness],
    config: SearchConfig,
    start_scale: float = 0.2,
) -> SearchReport:
    """Multi-start Nelder-Mead on ``objective`` followed by polishing the best starts.

    ``objective`` returns the exact section size for a parameter vector, or
    ``None`` if the parameters do not describe a valid object.
    """
    maximize = config.mode == "maximize"
    obj = _Tracked(objective, maximize)
    children = np.random.SeedSequence(config.seed).spawn(config.starts)
    finals = []
    for child in children:
        x0 = np.asarray(sample_start(make_rng(child)), dtype=float)
        x, fx = _nelder_mead(obj, x0, config.max_iters, config.tol, start_scale)
        finals.append((fx, x))
    history = tuple(-f if maximize else f for f, _ in finals)

    order = sorted(range(len(finals)), key=lambda i: finals[i][0])
    best_f, best_x = finals[order[0]]
    for i in order[: config.polish]:
        x, fx = _polish(obj, finals[i][1], finals[i][0], config)
        if fx < best_f:
            best_f, best_x = fx, x
    best_value = -best_f if maximize else best_f
    return SearchReport(
        best_value=float(best_value),
        best_witness=to_witness(best_x),
        history=history,
        mode=config.mode,
        evaluations=obj.count,
        extreme_evaluated=float(obj.extreme),
    )


# lines at distance t -------------------------------------------------------


def line_from_params(p: np.ndarray, t: float) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Map an unconstrained vector in R^{2n} to (base, unit direction) with |base| = t."""
    n = p.size // 2
    d = p[:n]
    nd = math.sqrt(d @ d)
    if nd < 1e-12:
        return None
    d = d / nd
    if t == 0:
        return np.zeros(n), d
    q = p[n:]
    q = q - (q @ d) * d
    nq = math.sqrt(q @ q)
    if nq < 1e-12:
        return None
    return t * q / nq, d


def _random_orthogonal(x: np.ndarray, rng) -> np.ndarray:
    w = rng.standard_normal(x.size)
    w -= (w @ x) / (x @ x) * x
    return w / np.linalg.norm(w)


def _random_face(n: int, rng):
    m = int(rng.integers(1, min(n, 3) + 1))
    return rng.choice(n, size=m, replace=False), rng.choice([-1.0, 1.0], size=m)


def _face_point(n: int, face, rng) -> np.ndarray:
    idx, signs = face
    x = np.zeros(n)
    x[idx] = signs * rng.dirichlet(np.ones(idx.size))
    return x


def _line_start(n: int, t: float, mode: str):
    def through_point(rng):
        # a line through a boundary point x with |x| >= t, so it meets the body
        for _ in range(10_000):
            x = _face_point(n, _random_face(n, rng), rng)
            r = np.linalg.norm(x)
            if r >= t:
                break
        else:
            x = np.zeros(n)
            x[int(rng.integers(n))] = 1.0
            r = 1.0
        w = _random_orthogonal(x, rng)
        sin_psi = t / r
        d = math.sqrt(max(1.0 - sin_psi**2, 0.0)) * x / r + sin_psi * w
        base = x - (x @ d) * d
        if np.linalg.norm(base) < 1e-12:
            base = _random_orthogonal(d, rng)
        return np.concatenate([d, base])

    def face_chord(rng):
        # the line through two points of one low-dimensional face (edges
        # included), moved parallel to itself out to distance t
        face = _random_face(n, rng)
        if face[0].size == 1:
            return through_point(rng)
        x = _face_point(n, face, rng)
        y = _face_point(n, face, rng)
        d = (y - x) / np.linalg.norm(y - x)
        base = x - (x @ d) * d
        r = np.linalg.norm(base)
        if r < 1e-12:
            base = _random_orthogonal(d, rng)
        elif r != t:
            base = base * (t / r)
        return np.concatenate([d, base])

    def uniform(rng):
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        return np.concatenate([d, _random_orthogonal(d, rng)])

    def sample(rng):
        if mode == "minimize" or t == 0:
            return uniform(rng)
        if rng.random() < 0.5:
            return face_chord(rng)
        return through_point(rng)

    return sample


def search_lines_at_distance(n: int, t: float, config: SearchConfig = SearchConfig()) -> SearchReport:
    """Extremal chord length of B_1^n over lines at distance exactly ``t``.

    In minimize mode with t > 1/sqrt(n) the answer is 0 (some lines miss the
    body) and no search is run.
    """
    if not 0 <= t <= 1:
        raise CrossPolytopeError("t must lie in [0, 1]")
    if config.mode == "minimize" and t > 1.0 / math.sqrt(n) + 1e-12:
        d = np.zeros(n)
        d[0], d[1] = 1.0, -1.0
        line = canonicalize_line(t * np.ones(n) / math.sqrt(n), direction=d)
        return SearchReport(0.0, line, (), config.mode, 0, 0.0, notes={"disjoint": True})

    def objective(p):
        line = line_from_params(p, t)
        if line is None:
            return None
        return chord_length(*line)

    def to_witness(p):
        base, d = line_from_params(p, t)
        return LineSpec(base, d)

    report = multistart(objective, _line_start(n, t, config.mode), to_witness, config)
    return report


# edge pairs ----------------------------------------------------------------

# an edge [s1 e_i, s2 e_j] is stored as ((i, s1), (j, s2))
Edge = Tuple[Tuple[int, int], Tuple[int, int]]


def _edge_pair_key(pair: Tuple[Edge, Edge]) -> tuple:
    """Canonical label of an edge pair under coordinate permutations and sign flips."""
    idx = sorted({i for edge in pair for i, _ in edge})
    best = None
    for perm in itertools.permutations(range(len(idx))):
        relabel = dict(zip(idx, perm))
        for flips in itertools.product((1, -1), repeat=len(idx)):
            flip = dict(zip(idx, flips))
            edges = sorted(
                tuple(sorted((relabel[i], s * flip[i]) for i, s in edge)) for edge in pair
            )
            key = tuple(edges)
            if best is None or key < best:
                best = key
    return best


def edge_pair_classes(n: int):
    """Representatives of all edge pairs of B_1^n up to symmetry."""
    verts = [(i, s) for i in range(n) for s in (1, -1)]
    edges = [(u, v) for u, v in itertools.combinations(verts, 2) if u[0] != v[0]]
    seen = {}
    for pair in itertools.combinations_with_replacement(edges, 2):
        key = _edge_pair_key(pair)
        seen.setdefault(key, key)
    return sorted(seen.values(), key=lambda k: (len({i for e in k for i, _ in e}), k))


def edge_pair_label(pair) -> str:
    def vertex(i, s):
        return f"{'-' if s < 0 else ''}e{i + 1}"

    return " & ".join(f"[{vertex(*e[0])},{vertex(*e[1])}]" for e in pair)


def _edge_point(edge, n):
    (i, si), (j, sj) = edge
    p0 = np.zeros(n)
    p0[i] = si
    p1 = np.zeros(n)
    p1[j] = sj
    return p0, p1 - p0


def _beta_roots(a, b0, db, t):
    """Parameters beta in [0, 1] for which the line through a and b0 + beta*db is at distance t.

    |a|^2 |b|^2 - <a,b>^2 - t^2 |a - b|^2 is a quadratic polynomial in beta.
    """
    aa = a @ a
    c_bb = (b0 @ b0, 2 * (b0 @ db), db @ db)
    c_ab = (a @ b0, a @ db)
    w = a - b0
    c_dd = (w @ w, -2 * (w @ db), db @ db)
    t2 = t * t
    c0 = aa * c_bb[0] - c_ab[0] ** 2 - t2 * c_dd[0]
    c1 = aa * c_bb[1] - 2 * c_ab[0] * c_ab[1] - t2 * c_dd[1]
    c2 = aa * c_bb[2] - c_ab[1] ** 2 - t2 * c_dd[2]
    scale = max(abs(c0), abs(c1), abs(c2))
    if scale == 0:
        # every line through a and B is at distance t
        return np.linspace(0.0, 1.0, 5)
    if abs(c2) <= 1e-14 * scale:
        if abs(c1) <= 1e-14 * scale:
            return np.empty(0)
        roots = np.array([-c0 / c1])
    else:
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            if disc > -1e-12 * scale * scale:
                disc = 0.0
            else:
                return np.empty(0)
        sq = math.sqrt(disc)
        # numerically stable quadratic roots
        qq = -0.5 * (c1 + math.copysign(sq, c1))
        roots = np.array([qq / c2, c0 / qq]) if qq != 0 else np.array([-c1 / (2 * c2)])
    tol = 1e-12
    roots = roots[(roots >= -tol) & (roots <= 1 + tol)]
    return np.clip(roots, 0.0, 1.0)


def _pair_best(edge_a, edge_b, n, t, grid, rounds):
    a0, da = _edge_point(edge_a, n)
    b0, db = _edge_point(edge_b, n)

    def value_at(alpha):
        a = a0 + alpha * da
        best = (-1.0, None)
        for beta in _beta_roots(a, b0, db, t):
            b = b0 + beta * db
            diff = b - a
            # nearly coincident points do not pin down a line
            if diff @ diff < 1e-12:
                continue
            # roots are only accurate to rounding; reject lines whose distance drifted
            u = diff / math.sqrt(diff @ diff)
            foot = a - (a @ u) * u
            if abs(math.sqrt(foot @ foot) - t) > 1e-12:
                continue
            length = chord_length(a, diff)
            if length > best[0]:
                best = (length, (a, b))
        return best

    alphas = np.linspace(0.0, 1.0, grid)
    vals = [value_at(al) for al in alphas]
    i = int(np.argmax([v[0] for v in vals]))
    best_val, best_pts = vals[i]
    if best_pts is None:
        return -1.0, None
    lo, hi = alphas[max(i - 1, 0)], alphas[min(i + 1, grid - 1)]
    for _ in range(rounds):
        sub = np.linspace(lo, hi, 21)
        sv = [value_at(al) for al in sub]
        j = int(np.argmax([v[0] for v in sv]))
        if sv[j][0] > best_val:
            best_val, best_pts = sv[j]
        step = sub[1] - sub[0]
        lo, hi = max(sub[j] - step, 0.0), min(sub[j] + step, 1.0)
    return best_val, best_pts


def search_edge_pair_lines(
    n: int, t: float, config: SearchConfig = SearchConfig(), grid: int = 401, rounds: int = 12
) -> SearchReport:
    """Longest chord among lines at distance ``t`` that meet two edges of B_1^n.

    One representative pair of edges is taken from each symmetry class; for
    a point a on the first edge the points b on the second with the line ab
    at distance t solve a quadratic, which leaves a one-parameter family that
    is scanned and then refined by zooming in on the best grid point.
    ``config`` contributes only its mode, which must be ``maximize``.
    """
    if config.mode != "maximize":
        raise CrossPolytopeError("edge-pair enumeration only makes sense for maximization")
    if not 0 <= t <= 1:
        raise CrossPolytopeError("t must lie in [0, 1]")
    per_class = []
    best_val, best_pts = -1.0, None
    for key in edge_pair_classes(n):
        val, pts = _pair_best(key[0], key[1], n, t, grid, rounds)
        per_class.append(max(val, 0.0))
        if val > best_val:
            best_val, best_pts = val, pts
    if best_pts is None:
        return SearchReport(0.0, None, tuple(per_class), "maximize", 0, 0.0)
    line = canonicalize_line(*best_pts)
    # snap the last bits of rounding so the witness sits exactly at distance t
    base = line.base if t == 0 else line.base * (t / np.linalg.norm(line.base))
    witness = LineSpec(base, line.direction)
    return SearchReport(
        best_value=line_section_length(witness).value,
        best_witness=witness,
        history=tuple(per_class),
        mode="maximize",
        evaluations=len(per_class),
        extreme_evaluated=float(max(per_class)),
        notes={"classes": [edge_pair_label(k) for k in edge_pair_classes(n)]},
    )


# hyperplanes at distance t -------------------------------------------------

OBJECTIVES = ("section-volume", "slab-volume")


def _normal_start(n: int, t: float):
    def sample(rng):
        a1 = rng.uniform(t, 1.0)
        rest = rng.standard_normal(n - 1)
        rest *= math.sqrt(1.0 - a1 * a1) / np.linalg.norm(rest)
        a = np.empty(n)
        i = int(rng.integers(n))
        a[i] = a1 * rng.choice([-1.0, 1.0])
        a[np.arange(n) != i] = rest
        return a

    return sample


def search_hyperplanes_at_distance(
    n: int,
    t: float,
    config: SearchConfig = SearchConfig(),
    objective: str = "section-volume",
) -> SearchReport:
    """Optimize over unit normals: maximize section volume or minimize slab volume."""
    if objective not in OBJECTIVES:
        raise CrossPolytopeError(f"objective must be one of {OBJECTIVES}")
    if n < 3 or not INV_SQRT2 < t < 1:
        raise CrossPolytopeError("need n >= 3 and 1/sqrt(2) < t < 1")

    def normal(p):
        norm = math.sqrt(p @ p)
        return None if norm < 1e-12 else p / norm

    if objective == "section-volume":

        def fn(p):
            a = normal(p)
            if a is None:
                return None
            return hyperplane_section_volume(HyperplaneSpec(a, t), n).value

        def to_witness(p):
            return HyperplaneSpec(normal(p), t)

    else:

        def fn(p):
            a = normal(p)
            if a is None:
                return None
            return slab_volume(SlabSpec(a, t), n).value

        def to_witness(p):
            return SlabSpec(normal(p), t)

    return multistart(fn, _normal_start(n, t), to_witness, config, start_scale=0.05)


# simplex ----------------------------------------------------------------


def simplex_direction(p: np.ndarray) -> Optional[np.ndarray]:
    v = p - p.mean()
    norm = math.sqrt(v @ v)
    if norm < 1e-12:
        return None
    v = v / norm
    # re-center after scaling so the sum is zero to rounding
    return v - v.mean()


def search_simplex_central_lines(n: int, config: SearchConfig = SearchConfig()) -> SearchReport:
    """Extremal length of central line sections of the simplex conv{e_1, ..., e_n}."""
    if n < 3:
        raise CrossPolytopeError("need n >= 3")

    def fn(p):
        v = simplex_direction(p)
        if v is None:
            return None
        return simplex_central_line_length(v)

    def to_witness(p):
        centroid = np.full(n, 1.0 / n)
        return canonicalize_line(centroid, direction=simplex_direction(p))

    def sample(rng):
        return rng.standard_normal(n)

    return multistart(fn, sample, to_witness, config)
