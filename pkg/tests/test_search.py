import math
from dataclasses import replace

import numpy as np
import pytest

from crosspoly import closed_forms as cf
from crosspoly.core import CrossPolytopeError
from crosspoly.exact import hyperplane_section_volume, line_section_length, slab_volume
from crosspoly.search import (
    SearchConfig,
    edge_pair_classes,
    edge_pair_label,
    line_from_params,
    search_edge_pair_lines,
    search_hyperplanes_at_distance,
    search_lines_at_distance,
    search_simplex_central_lines,
)

SMALL = SearchConfig(starts=12, max_iters=300, polish=3, seed=11)


def check_line_witness(report, t):
    w = report.best_witness
    assert w.distance == pytest.approx(t, abs=1e-9)
    assert line_section_length(w).value == pytest.approx(report.best_value, abs=1e-9)


def test_line_params_keep_distance():
    rng = np.random.default_rng(0)
    for t in (0.0, 0.3, 0.9):
        for _ in range(50):
            out = line_from_params(rng.standard_normal(2 * 4), t)
            if out is None:
                continue
            base, d = out
            assert np.linalg.norm(base) == pytest.approx(t, abs=1e-12)
            assert abs(base @ d) < 1e-12


@pytest.mark.parametrize("n,t", [(3, 0.0), (3, 0.5), (3, 0.8), (4, 0.3)])
def test_max_line_search_matches_closed_form(n, t):
    report = search_lines_at_distance(n, t, SMALL)
    expected = cf.max_line_length(n, t).value
    assert report.best_value == pytest.approx(expected, abs=1e-5)
    assert report.best_value <= expected + 1e-9
    check_line_witness(report, t)


@pytest.mark.parametrize("n,t", [(3, 0.0), (3, 0.1), (3, 0.5), (4, 0.25)])
def test_min_line_search_matches_closed_form(n, t):
    report = search_lines_at_distance(n, t, replace(SMALL, mode="minimize"))
    expected = cf.min_line_length(n, t).value
    assert report.best_value == pytest.approx(expected, abs=1e-5)
    assert report.best_value >= expected - 1e-9
    check_line_witness(report, t)


def test_line_search_examples():
    assert search_lines_at_distance(3, 0.5, SMALL).best_value == pytest.approx(1.4641016151377546, abs=1e-6)
    low = search_lines_at_distance(3, 0.5, replace(SMALL, mode="minimize"))
    assert low.best_value == pytest.approx(2 - math.sqrt(2), abs=1e-6)
    assert search_lines_at_distance(2, 0.0, SMALL).best_value == pytest.approx(2.0, abs=1e-9)


def test_min_line_search_disjoint_shortcut():
    report = search_lines_at_distance(3, 0.6, replace(SMALL, mode="minimize"))
    assert report.best_value == 0.0 and report.notes["disjoint"]
    assert line_section_length(report.best_witness).value == 0.0
    assert report.best_witness.distance == pytest.approx(0.6)


@pytest.mark.parametrize("n,t", [(3, 0.5), (3, 0.72), (4, 0.74), (3, 0.9)])
def test_edge_pair_enumeration(n, t):
    report = search_edge_pair_lines(n, t)
    assert report.best_value == pytest.approx(cf.max_line_length(n, t).value, abs=1e-7)
    check_line_witness(report, t)


def test_edge_pair_rules():
    with pytest.raises(CrossPolytopeError):
        search_edge_pair_lines(3, 0.5, SearchConfig(mode="minimize"))
    # same edge, adjacent edges, parallel edges of the square
    assert len(edge_pair_classes(2)) == 3
    counts = [len(edge_pair_classes(n)) for n in (2, 3, 4, 5)]
    assert counts == sorted(counts) and counts[-1] == counts[-2]
    assert edge_pair_label((((0, 1), (1, -1)), ((0, -1), (2, 1)))) == "[e1,-e2] & [-e1,e3]"


@pytest.mark.parametrize("n,t", [(3, 0.8), (4, 0.9)])
def test_hyperplane_search(n, t):
    cfg = SearchConfig(starts=8, max_iters=300, polish=3, seed=5)
    hyp = search_hyperplanes_at_distance(n, t, cfg, "section-volume")
    assert hyp.best_value == pytest.approx(cf.max_hyperplane_volume(n, t).value, rel=1e-6)
    assert hyperplane_section_volume(hyp.best_witness).value == pytest.approx(hyp.best_value, rel=1e-12)
    slab = search_hyperplanes_at_distance(n, t, replace(cfg, mode="minimize"), "slab-volume")
    assert slab.best_value == pytest.approx(cf.min_slab_volume(n, t).value, abs=1e-9)
    assert slab_volume(slab.best_witness).value == pytest.approx(slab.best_value, rel=1e-12)


def test_hyperplane_search_rejects_bad_regime():
    with pytest.raises(CrossPolytopeError):
        search_hyperplanes_at_distance(3, 0.7)
    with pytest.raises(CrossPolytopeError):
        search_hyperplanes_at_distance(2, 0.8)
    with pytest.raises(CrossPolytopeError):
        search_hyperplanes_at_distance(3, 0.8, objective="mean-width")


@pytest.mark.parametrize("n", [3, 4, 5])
def test_simplex_search(n):
    lo, hi = cf.simplex_extremes(n)
    low = search_simplex_central_lines(n, replace(SMALL, mode="minimize"))
    high = search_simplex_central_lines(n, SMALL)
    assert low.best_value == pytest.approx(lo, abs=1e-6)
    assert high.best_value == pytest.approx(hi, abs=1e-6)
    assert abs(low.best_witness.direction.sum()) < 1e-12


def test_search_is_deterministic():
    a = search_lines_at_distance(3, 0.3, SMALL)
    b = search_lines_at_distance(3, 0.3, SMALL)
    assert a.best_value == b.best_value and a.history == b.history
    assert np.array_equal(a.best_witness.base, b.best_witness.base)


def test_report_gaps():
    report = search_lines_at_distance(3, 0.5, SMALL).with_closed_form(cf.max_line_length(3, 0.5).value)
    assert report.certified_gap == pytest.approx(-report.gap)
    assert report.certified_gap < 1e-5


def test_config_validation():
    with pytest.raises(CrossPolytopeError):
        SearchConfig(mode="sideways")
    with pytest.raises(CrossPolytopeError):
        SearchConfig(starts=0)
    with pytest.raises(CrossPolytopeError):
        search_lines_at_distance(3, 1.5)
    assert math.isfinite(SearchConfig().tol)
