import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq, minimize_scalar
from scipy.spatial import ConvexHull

from crosspoly.core import (
    ConditioningError,
    CrossPolytopeError,
    HyperplaneSpec,
    LineSpec,
    RegimeError,
    SlabSpec,
    canonicalize_line,
    l1_norm,
)
from crosspoly.exact import (
    _denominator,
    chopped_volume,
    hyperplane_section_volume,
    isosceles_min_chord,
    isosceles_tilted_chord,
    line_section_length,
    simplex_central_line_length,
    simplex_chord_through_centroid,
    slab_volume,
    vertex_frame,
)
from crosspoly.montecarlo import hyperplane_basis

SKEW = np.array([0.9, 0.3, math.sqrt(0.10)])


def length(p1, p2):
    return line_section_length(canonicalize_line(p1, p2)).value


# -- lines ------------------------------------------------------------------


def test_line_examples():
    e = np.eye(3)
    assert length(e[0], -e[0]) == pytest.approx(2.0, abs=1e-15)
    assert length([1, 0], [0, 1]) == pytest.approx(math.sqrt(2), abs=1e-15)
    line = canonicalize_line([0.9, 0, 0], direction=[0, 1, 0])
    assert line_section_length(line).value == pytest.approx(0.2, abs=1e-15)


def test_line_through_diamond_construction():
    # n = 3, k = 1, t = 0.5: a = (1 - th) u_1 + th v_1, b = -(1 - th) u_1 + th v_1
    theta = 0.5 * math.sqrt(2)
    u, v = np.array([1.0, 0, 0]), np.array([0, 0.5, 0.5])
    a = (1 - theta) * u + theta * v
    b = -(1 - theta) * u + theta * v
    assert length(a, b) == pytest.approx(2 - math.sqrt(2), abs=1e-12)
    assert canonicalize_line(a, b).distance == pytest.approx(0.5, abs=1e-15)


def test_tangent_and_missing_lines():
    touch = line_section_length(canonicalize_line([1, 0, 0], direction=[0, 1, 0]))
    assert touch.value == 0.0 and touch.tangent
    miss = line_section_length(canonicalize_line([0.9, 0.9, 0], direction=[1, -1, 0]))
    assert miss.value == 0.0 and not miss.tangent


def test_line_inside_a_facet_hyperplane():
    # the edge [e1, e2] lies in the facet x1 + x2 + x3 = 1
    assert length([1, 0, 0], [0, 1, 0]) == pytest.approx(math.sqrt(2), abs=1e-15)
    # the chord is the facet segment between the two points
    assert length([0.5, 0.5, 0], [0, 0.5, 0.5]) == pytest.approx(math.sqrt(0.5), abs=1e-12)


def brute_force_length(base, d):
    f = lambda s: l1_norm(base + s * d) - 1.0  # noqa: E731
    res = minimize_scalar(lambda s: f(s), bounds=(-4, 4), method="bounded", options={"xatol": 1e-13})
    if f(res.x) >= -1e-9:
        return 0.0
    lo = brentq(f, -4.0, res.x, xtol=1e-15)
    hi = brentq(f, res.x, 4.0, xtol=1e-15)
    return hi - lo


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_line_length_matches_root_finding(n, seed):
    rng = np.random.default_rng(seed)
    d = rng.standard_normal(n)
    d /= np.linalg.norm(d)
    base = rng.uniform(-0.6, 0.6, n)
    line = canonicalize_line(base, direction=d)
    ours = line_section_length(line).value
    assert ours == pytest.approx(brute_force_length(line.base, line.direction), abs=1e-8)


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_line_length_concave_along_parallel_family(n, seed):
    rng = np.random.default_rng(seed)
    d = rng.standard_normal(n)
    d /= np.linalg.norm(d)
    b1, b2 = rng.uniform(-0.5, 0.5, (2, n))
    l1 = line_section_length(LineSpec(b1 - (b1 @ d) * d, d)).value
    l2 = line_section_length(LineSpec(b2 - (b2 @ d) * d, d)).value
    if l1 == 0 or l2 == 0:
        return
    m = 0.5 * (b1 + b2)
    lm = line_section_length(LineSpec(m - (m @ d) * d, d)).value
    assert lm >= 0.5 * (l1 + l2) - 1e-9


# -- caps and sections -------------------------------------------------------


def cap_vertices(a, t):
    """Vertices of B_1^n ∩ {<x,a> >= t} when only the vertex e_i of largest a_i is cut."""
    frame = vertex_frame(a)
    c = frame.canonical
    n = c.size
    pts = [np.eye(n)[0]]
    for j in range(1, n):
        for s in (1.0, -1.0):
            lam = (c[0] - t) / (c[0] - s * c[j])
            p = np.zeros(n)
            p[0], p[j] = 1 - lam, s * lam
            pts.append(p)
    return np.array([frame.to_original(p) for p in pts])


def test_chopped_examples():
    assert chopped_volume([1, 0, 0], 0.8) == pytest.approx(4 * 0.2**3 / 6, rel=1e-12)
    expected = 4 * 0.15**3 * 0.9 / (6 * 0.72 * 0.71)
    assert chopped_volume(SKEW, 0.75) == pytest.approx(expected, rel=1e-12)
    assert chopped_volume(SKEW, 0.75) == pytest.approx(0.0039613, abs=1e-7)
    assert chopped_volume(SKEW, 0.9 - 1e-13) == 0.0


def test_chopped_vanishes_as_t_approaches_a1():
    values = [chopped_volume(SKEW, 0.9 - h) for h in (1e-2, 1e-3, 1e-4)]
    assert values[0] > values[1] > values[2] > 0
    assert values[2] < 1e-10


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_chopped_matches_convex_hull_volume(n):
    rng = np.random.default_rng(n)
    for _ in range(25):
        t = rng.uniform(0.72, 0.97)
        a1 = rng.uniform(t + 0.01, 1.0)
        rest = rng.standard_normal(n - 1)
        rest *= math.sqrt(1 - a1 * a1) / np.linalg.norm(rest)
        a = np.concatenate([[a1], rest])
        a = a[rng.permutation(n)] * rng.choice([-1.0, 1.0], n)
        hull = ConvexHull(cap_vertices(a, t))
        assert chopped_volume(a, t) == pytest.approx(hull.volume, rel=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_section_matches_convex_hull_area(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(25):
        t = rng.uniform(0.72, 0.97)
        a1 = rng.uniform(t + 0.01, 1.0)
        rest = rng.standard_normal(n - 1)
        rest *= math.sqrt(1 - a1 * a1) / np.linalg.norm(rest)
        a = np.concatenate([[a1], rest])
        a = a[rng.permutation(n)] * rng.choice([-1.0, 1.0], n)
        pts = cap_vertices(a, t)[1:]
        flat = (pts - t * a) @ hyperplane_basis(a).T
        area = ConvexHull(flat).volume if n > 2 else None
        got = hyperplane_section_volume(HyperplaneSpec(a, t)).value
        assert got == pytest.approx(area, rel=1e-9)


def test_section_examples():
    assert hyperplane_section_volume(HyperplaneSpec(np.eye(3)[0], 0.8)).value == pytest.approx(0.08, rel=1e-12)
    v = hyperplane_section_volume(HyperplaneSpec(SKEW, 0.75)).value
    assert v == pytest.approx(0.0792254, abs=1e-7)
    assert v == pytest.approx(3 * chopped_volume(SKEW, 0.75) / (0.9 - 0.75), rel=1e-13)
    v4 = hyperplane_section_volume(HyperplaneSpec(np.eye(4)[1], 0.9)).value
    assert v4 == pytest.approx(8 * 0.001 / 6, rel=1e-12)


def test_section_tangent_and_missing():
    res = hyperplane_section_volume(HyperplaneSpec(np.eye(3)[0], 1.0))
    assert res.value == 0.0 and res.tangent
    a = np.array([0.75, 0.6, math.sqrt(1 - 0.75**2 - 0.36)])
    res = hyperplane_section_volume(HyperplaneSpec(a, 0.8))
    assert res.value == 0.0 and not res.tangent


def test_regime_errors():
    with pytest.raises(RegimeError):
        hyperplane_section_volume(HyperplaneSpec(np.eye(3)[0], 0.7))
    with pytest.raises(RegimeError):
        hyperplane_section_volume(HyperplaneSpec(np.eye(2)[0], 0.8))
    with pytest.raises(RegimeError):
        chopped_volume(np.eye(3)[0], 1 / math.sqrt(2))
    with pytest.raises(RegimeError):
        slab_volume(SlabSpec(np.eye(2)[0], 0.8))
    with pytest.raises(CrossPolytopeError):
        hyperplane_section_volume(HyperplaneSpec(np.eye(3)[0], 0.8), n=4)


def test_conditioning_guard():
    with pytest.raises(ConditioningError):
        _denominator(np.array([0.7, 0.7, 0.1]))


@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_section_permutation_and_sign_invariance(n, seed):
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.72, 0.95)
    a1 = rng.uniform(t, 1.0)
    rest = rng.standard_normal(n - 1)
    rest *= math.sqrt(1 - a1 * a1) / np.linalg.norm(rest)
    a = np.concatenate([[a1], rest])
    b = a[rng.permutation(n)] * rng.choice([-1.0, 1.0], n)
    va = hyperplane_section_volume(HyperplaneSpec(a, t)).value
    vb = hyperplane_section_volume(HyperplaneSpec(b, t)).value
    assert vb == pytest.approx(va, rel=1e-12, abs=1e-300)


def test_slab_examples():
    e1 = np.eye(3)[0]
    assert slab_volume(SlabSpec(e1, 0.8)).value == pytest.approx(8 / 6 * (1 - 0.2**3), rel=1e-14)
    assert slab_volume(SlabSpec(SKEW, 1.0)).value == pytest.approx(4 / 3, rel=1e-15)
    assert slab_volume(SlabSpec(SKEW, 0.75)).value == pytest.approx(1.3254107, abs=1e-7)
    a = np.array([0.75, 0.6, math.sqrt(1 - 0.75**2 - 0.36)])
    assert slab_volume(SlabSpec(a, 0.8)).value == pytest.approx(4 / 3, rel=1e-15)


# -- simplex -----------------------------------------------------------------


def test_simplex_central_line_examples():
    s2 = math.sqrt(2)
    assert simplex_central_line_length(np.array([1, -1, 0]) / s2) == pytest.approx(2 * s2 / 3, abs=1e-15)
    v = np.array([2, -1, -1]) / math.sqrt(6)
    assert simplex_central_line_length(v) == pytest.approx(math.sqrt(1.5), abs=1e-15)
    assert simplex_central_line_length(np.array([1, -1, 0, 0]) / s2) == pytest.approx(s2 / 2, abs=1e-15)
    with pytest.raises(CrossPolytopeError):
        simplex_central_line_length(np.array([1.0, 0, 0]))


def brute_force_simplex_chord(x):
    """Clip the line x + s (z - x) against x_i >= 0; the sum constraint holds along it."""
    n = x.size
    d = np.full(n, 1.0 / n) - x
    s_max = min(-x[i] / d[i] for i in range(n) if d[i] < 0)
    return s_max * np.linalg.norm(d)


def test_simplex_chord_examples():
    assert simplex_chord_through_centroid([1, 0, 0]) == pytest.approx(math.sqrt(1.5), abs=1e-15)
    assert simplex_chord_through_centroid([0.5, 0.5, 0]) == pytest.approx(math.sqrt(1.5), abs=1e-15)
    x = np.array([0.7, 0.3, 0])
    assert simplex_chord_through_centroid(x) == pytest.approx(brute_force_simplex_chord(x), abs=1e-14)
    assert simplex_chord_through_centroid(x) == pytest.approx(0.9481604634569035, abs=1e-13)
    with pytest.raises(CrossPolytopeError):
        simplex_chord_through_centroid([0.5, 0.25, 0.25])
    with pytest.raises(CrossPolytopeError):
        simplex_chord_through_centroid([0.5, 0.2, 0])


@pytest.mark.parametrize("n", [3, 4, 5, 8])
def test_simplex_bounds_on_random_inputs(n):
    rng = np.random.default_rng(n)
    lo, hi = 2 * math.sqrt(2) / n, math.sqrt(n / (n - 1))
    for _ in range(2000):
        v = rng.standard_normal(n)
        v -= v.mean()
        v /= np.linalg.norm(v)
        assert simplex_central_line_length(v) >= lo - 1e-12
        x = np.zeros(n)
        x[:-1] = rng.dirichlet(np.ones(n - 1))
        if abs(n * x.max() - 1) < 1e-6:
            continue
        chord = simplex_chord_through_centroid(x)
        assert chord <= hi + 1e-12
        assert chord == pytest.approx(brute_force_simplex_chord(x), rel=1e-12)


def test_simplex_minimum_only_for_two_coordinate_directions():
    v = np.array([1, -0.5, -0.5, 0]) / math.sqrt(1.5)
    assert simplex_central_line_length(v) > 2 * math.sqrt(2) / 4 + 1e-3


# -- isosceles triangle -------------------------------------------------------


def test_isosceles_examples():
    assert isosceles_min_chord(1, 1, 0) == 2
    assert isosceles_min_chord(1, 1, 1 / math.sqrt(2)) == pytest.approx(2 - math.sqrt(2), abs=1e-15)
    assert isosceles_min_chord(1, 1 / math.sqrt(2), 0.5) == pytest.approx(2 - math.sqrt(2), abs=1e-15)
    with pytest.raises(CrossPolytopeError):
        isosceles_min_chord(1, 1, 0.8)


@given(
    st.floats(0.2, 2.0),
    st.floats(0.2, 2.0),
    st.floats(0.0, 1.0),
    st.floats(1e-3, 1.0),
)
@settings(max_examples=300, deadline=None)
def test_tilted_chord_bounded_below_by_min_chord(u, v, frac_t, frac_theta):
    t = frac_t * u * v / math.hypot(u, v)
    alpha = math.atan2(u, v)
    theta = frac_theta * (math.pi / 2 - alpha) * 0.999
    base = isosceles_min_chord(u, v, t)
    assert isosceles_tilted_chord(u, v, t, 0.0) == pytest.approx(base, rel=1e-12, abs=1e-15)
    assert isosceles_tilted_chord(u, v, t, theta) >= base - 1e-12
