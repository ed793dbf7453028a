import math

import numpy as np
import pytest

from crosspoly import closed_forms as cf
from crosspoly.core import CrossPolytopeError, RegimeError, project_qk
from crosspoly.exact import (
    hyperplane_section_volume,
    isosceles_tilted_chord,
    line_section_length,
    simplex_central_line_length,
    slab_volume,
)

T_GRID = np.round(np.linspace(0, 1, 41), 12)


def test_max_line_examples():
    assert cf.max_line_length(3, 0.0).value == pytest.approx(2.0, abs=1e-15)
    assert cf.max_line_length(3, 0.5).value == pytest.approx(2 / (0.5 + math.sqrt(0.75)), abs=1e-12)
    assert cf.max_line_length(2, 1 / math.sqrt(2)).value == pytest.approx(math.sqrt(2), abs=1e-12)
    # evaluated directly from the tilted-corner branch
    assert cf.max_line_length(3, 0.74).value == pytest.approx(0.52182575, abs=1e-8)
    assert cf.max_line_length(3, 0.8).value == pytest.approx(0.4, abs=1e-12)
    assert cf.max_line_length(5, 1.0).value == 0.0


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_max_line_witness_realizes_value(n):
    for t in T_GRID:
        ans = cf.max_line_length(n, t)
        assert ans.witness.distance == pytest.approx(t, abs=1e-12)
        assert line_section_length(ans.witness).value == pytest.approx(ans.value, abs=1e-9)


def test_max_line_branches_and_monotonicity():
    branches = [cf.max_line_length(3, t).branch for t in T_GRID]
    assert branches[0] == "through-vertex" and branches[-1] == "perpendicular-corner"
    assert "tilted-corner" in branches
    # nonincreasing within each branch
    for name in set(branches):
        values = [cf.max_line_length(3, t).value for t, b in zip(T_GRID, branches) if b == name]
        assert all(x >= y - 1e-15 for x, y in zip(values, values[1:]))


def test_max_line_jumps_at_inverse_sqrt2_and_is_continuous_at_three_quarters():
    below = cf.max_line_length(3, 1 / math.sqrt(2)).value
    above = cf.max_line_length(3, 1 / math.sqrt(2) + 1e-12).value
    assert below - above == pytest.approx(math.sqrt(2) - 1 / math.sqrt(2), abs=1e-5)
    left = cf.max_line_length(3, 0.75).value
    right = cf.max_line_length(3, 0.75 + 1e-12).value
    assert left == pytest.approx(right, abs=1e-10)


def test_thresholds():
    assert cf.threshold(3, 1) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert cf.threshold(3, 2) == pytest.approx(math.sqrt(3) / (3 * (math.sqrt(2) + math.sqrt(3))), abs=1e-15)
    assert cf.threshold(3, 2) == pytest.approx(0.1835, abs=1e-4)
    for n in range(2, 9):
        table = cf.threshold_table(n)
        assert table[0] == pytest.approx(1 / math.sqrt(n), abs=1e-15)
        assert all(a > b for a, b in zip(table.values, table.values[1:]))
    with pytest.raises(CrossPolytopeError):
        cf.threshold(3, 3)


def test_threshold_branches_are_left_closed():
    table = cf.threshold_table(4)
    assert table.branch_for(table[2]) == 2
    assert table.branch_for(np.nextafter(table[2], 0)) == 3
    assert table.branch_for(0.0) == 4


def test_min_line_examples():
    assert cf.min_line_length(3, 0.0).value == pytest.approx(2 / math.sqrt(3), abs=1e-15)
    assert cf.min_line_length(3, 0.5).value == pytest.approx(2 - math.sqrt(2), abs=1e-12)
    assert cf.min_line_length(3, 0.5).branch == "k=1"
    assert cf.min_line_length(4, 0.25).value == pytest.approx(0.8660254, abs=1e-7)
    assert cf.min_line_length(3, 0.6).value == 0.0
    assert cf.min_line_length(3, 0.6).branch == "disjoint"


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_min_line_witness_realizes_value(n):
    for t in T_GRID:
        ans = cf.min_line_length(n, t)
        assert ans.witness.distance == pytest.approx(t, abs=1e-12)
        assert line_section_length(ans.witness).value == pytest.approx(ans.value, abs=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5, 8])
def test_min_line_continuous_at_thresholds(n):
    table = cf.threshold_table(n)
    for k in range(1, n):
        at = cf.min_line_length(n, table[k]).value
        below = cf.min_line_length(n, table[k] - 1e-13).value
        assert at == pytest.approx(below, abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_min_line_jump_at_inradius(n):
    r = 1 / math.sqrt(n)
    assert cf.min_line_length(n, r).value == pytest.approx(2 * (1 - math.sqrt((n - 1) / n)), abs=1e-12)
    assert cf.min_line_length(n, r + 1e-9).value == 0.0
    with pytest.raises(RegimeError):
        cf.min_line_endpoints(n, r + 1e-9)


def test_mk_examples_and_isosceles_form():
    assert cf.mk(3, 1, 0.5) == pytest.approx(2 - math.sqrt(2), abs=1e-15)
    assert cf.mk(4, 3, 0.25) == pytest.approx(0.8660254, abs=1e-7)
    for n in range(2, 8):
        for k in range(1, n):
            for t in np.linspace(0, 1 / math.sqrt(n), 7):
                assert cf.mk_via_isosceles(n, k, t) == pytest.approx(cf.mk(n, k, t), abs=1e-12)
    with pytest.raises(CrossPolytopeError):
        cf.mk(3, 0, 0.1)
    with pytest.raises(CrossPolytopeError):
        cf.mk(3, 1, 0.7)


def test_mk_is_the_minimum_over_tilted_chords():
    d = cf.DiamondData(4, 3)
    alpha = math.atan2(d.u_norm, d.v_norm)
    thetas = np.linspace(0, (math.pi / 2 - alpha) * 0.999, 2001)
    best = min(isosceles_tilted_chord(d.u_norm, d.v_norm, 0.25, th) for th in thetas)
    assert best == pytest.approx(0.8660254, abs=1e-7)


@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (5, 2), (6, 4)])
def test_diamond_projection(n, k):
    d = cf.DiamondData(n, k)
    assert d.u @ d.v == 0.0
    assert np.linalg.norm(d.u) == pytest.approx(d.u_norm)
    assert np.linalg.norm(d.v) == pytest.approx(d.v_norm)
    for i in range(n):
        for s in (1.0, -1.0):
            e = np.zeros(n)
            e[i] = s
            target = s * (d.u if i < k else d.v)
            assert np.allclose(project_qk(e, k), target, atol=1e-15)


def test_hyperplane_and_slab_examples():
    assert cf.max_hyperplane_volume(3, 0.8).value == pytest.approx(0.08, rel=1e-14)
    assert cf.max_hyperplane_volume(3, 1.0).value == 0.0
    assert cf.min_slab_volume(3, 0.8).value == pytest.approx(1.3226667, abs=1e-7)
    assert cf.min_slab_volume(3, 1.0).value == pytest.approx(4 / 3, rel=1e-15)
    for bad in (0.7, 1 / math.sqrt(2), 1.1):
        with pytest.raises(CrossPolytopeError):
            cf.max_hyperplane_volume(3, bad)
        with pytest.raises(CrossPolytopeError):
            cf.min_slab_volume(3, bad)
    with pytest.raises(CrossPolytopeError):
        cf.max_hyperplane_volume(2, 0.8)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_hyperplane_and_slab_witnesses(n):
    for t in (0.72, 0.8, 0.9, 0.99):
        hyp = cf.max_hyperplane_volume(n, t)
        assert hyperplane_section_volume(hyp.witness).value == pytest.approx(hyp.value, rel=1e-12)
        slab = cf.min_slab_volume(n, t)
        assert slab_volume(slab.witness).value == pytest.approx(slab.value, rel=1e-12)


def test_simplex_extremes():
    lo, hi = cf.simplex_extremes(3)
    assert lo == pytest.approx(2 * math.sqrt(2) / 3)
    assert hi == pytest.approx(math.sqrt(1.5))
    for n in range(3, 9):
        lo, hi = cf.simplex_extremes(n)
        assert simplex_central_line_length(cf.simplex_min_direction(n)) == pytest.approx(lo, abs=1e-14)
        assert simplex_central_line_length(cf.simplex_max_direction(n)) == pytest.approx(hi, abs=1e-14)
    with pytest.raises(CrossPolytopeError):
        cf.simplex_extremes(2)
