"""End-to-end numerical certification of the extremal formulas.

Each check compares a closed form from :mod:`crosspoly.closed_forms` with an
independent route (multi-start search, edge-pair enumeration, Monte Carlo,
explicit witnesses) at a fixed tolerance.  The report contains no wall-clock
data, so the same level and seed always give byte-identical output.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from . import closed_forms as cf
from .core import HyperplaneSpec, SlabSpec, line_distance_to_origin, unit_vector
from .exact import (
    INV_SQRT2,
    chopped_volume,
    chord_length,
    hyperplane_section_volume,
    line_section_length,
    simplex_central_line_length,
    simplex_chord_through_centroid,
    slab_volume,
    vertex_frame,
)
from .montecarlo import (
    make_rng,
    mc_chopped_volume,
    mc_hyperplane_section_volume,
    mc_slab_volume,
)
from .search import (
    SearchConfig,
    search_edge_pair_lines,
    search_hyperplanes_at_distance,
    search_lines_at_distance,
    search_simplex_central_lines,
)

# line grid: 0, 0.1, ..., 1 plus the branch points of the maximal length
LINE_T_GRID = tuple(sorted({round(k / 10, 10) for k in range(11)} | {INV_SQRT2, 0.75}))
HYPERPLANE_T_GRID = (0.72, 0.8, 0.9, 0.99)

SEARCH_TOL = 1e-5
OVERSHOOT_TOL = 1e-9
WITNESS_TOL = 1e-9
DISTANCE_TOL = 1e-12
HYPERPLANE_REL_TOL = 1e-6
SLAB_TOL = 1e-12
SIMPLEX_TOL = 1e-6
IDENTITY_TOL = 1e-12
THRESHOLD_TOL = 1e-14
MC_SIGMAS = 3.0


@dataclass(frozen=True)
class VerifyPlan:
    level: str
    line_dims: Sequence[int]
    hyperplane_dims: Sequence[int]
    mc_dims: Sequence[int]
    simplex_dims: Sequence[int]
    mc_samples: int
    mc_configs: int = 20
    line_starts: int = 32
    line_iters: int = 300
    line_polish: int = 4
    normal_starts: int = 16
    simplex_starts: int = 16
    probe_starts: int = 12
    random_normals_minh: int = 10_000
    random_normals_slab: int = 1_000
    random_normals_identity: int = 1_000


PLANS = {
    "quick": VerifyPlan(
        level="quick",
        line_dims=(2, 3, 4),
        hyperplane_dims=(3, 4),
        mc_dims=(3, 4),
        simplex_dims=(3, 4),
        mc_samples=100_000,
        line_starts=16,
        normal_starts=8,
        simplex_starts=8,
        probe_starts=8,
    ),
    "full": VerifyPlan(
        level="full",
        line_dims=(2, 3, 4, 5),
        hyperplane_dims=(3, 4, 5, 6),
        mc_dims=(3, 4, 5),
        simplex_dims=(3, 4, 5, 6, 7, 8),
        mc_samples=1_000_000,
    ),
}


@dataclass
class CheckResult:
    name: str
    title: str
    # None marks an informational check that cannot fail
    passed: Optional[bool]
    summary: str
    metrics: Dict[str, object] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.passed = False
        if len(self.failures) < 20:
            self.failures.append(message)

    @property
    def status(self) -> str:
        if self.passed is None:
            return "INFO"
        return "PASS" if self.passed else "FAIL"


@dataclass
class VerifyReport:
    manifest: Dict[str, object]
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "manifest": self.manifest,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [
            f"crosspoly {self.manifest['version']} verification, "
            f"level={self.manifest['level']} seed={self.manifest['seed']}"
        ]
        for c in self.checks:
            lines.append(f"{c.status}  {c.name:<20} {c.title}")
            lines.append(f"      {c.summary}")
            for message in c.failures:
                lines.append(f"      ! {message}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _seed(seed: int, name: str, *idx: int):
    return (seed, zlib.crc32(name.encode()), *idx)


def _g(x: float) -> str:
    return f"{x:.3e}"


def _search_cfg(plan: VerifyPlan, seed, mode: str, starts: int) -> SearchConfig:
    return SearchConfig(
        starts=starts,
        max_iters=plan.line_iters,
        polish=plan.line_polish,
        seed=seed,
        mode=mode,
    )


def _line_witness_errors(line, t: float, value: float):
    if line is None:
        # no chord exists at all; only acceptable for a zero answer
        return abs(value), 0.0
    return (
        abs(line_section_length(line).value - value),
        abs(line.distance - t),
    )


def check_max_line(plan: VerifyPlan, seed: int) -> CheckResult:
    res = CheckResult(
        "max-line",
        "longest chord at distance t: search and edge-pair enumeration vs closed form",
        True,
        "",
    )
    worst_search = worst_edge = worst_over = worst_witness = worst_dist = 0.0
    rows = 0
    for n in plan.line_dims:
        for i, t in enumerate(LINE_T_GRID):
            rows += 1
            answer = cf.max_line_length(n, t)
            value = answer.value
            w_err, d_err = _line_witness_errors(answer.witness, t, value)
            config = _search_cfg(plan, _seed(seed, res.name, n, i), "maximize", plan.line_starts)
            reports = {
                "search": search_lines_at_distance(n, t, config),
                "edge-pair": search_edge_pair_lines(n, t),
            }
            for label, rep in reports.items():
                gap = abs(rep.best_value - value)
                over = rep.extreme_evaluated - value
                rw, rd = _line_witness_errors(rep.best_witness, t, rep.best_value)
                if label == "search":
                    worst_search = max(worst_search, gap)
                else:
                    worst_edge = max(worst_edge, gap)
                worst_over = max(worst_over, over)
                w_err, d_err = max(w_err, rw), max(d_err, rd)
                if gap > SEARCH_TOL:
                    res.fail(f"n={n} t={t:.6g} {label} best {rep.best_value!r} vs {value!r}")
                if over > OVERSHOOT_TOL:
                    res.fail(f"n={n} t={t:.6g} {label} evaluated {rep.extreme_evaluated!r} > {value!r}")
            worst_witness = max(worst_witness, w_err)
            worst_dist = max(worst_dist, d_err)
            if w_err > WITNESS_TOL or d_err > DISTANCE_TOL:
                res.fail(f"n={n} t={t:.6g} witness off by {w_err:.3g} (distance {d_err:.3g})")
    res.metrics = {
        "rows": rows,
        "max_gap_search": worst_search,
        "max_gap_edge_pair": worst_edge,
        "max_overshoot": worst_over,
        "max_witness_error": worst_witness,
        "max_distance_error": worst_dist,
    }
    res.summary = (
        f"{rows} (n,t) rows; max |search - formula| {_g(worst_search)}, "
        f"max |edge-pair - formula| {_g(worst_edge)}, max overshoot {_g(worst_over)}"
    )
    return res


def check_min_line(plan: VerifyPlan, seed: int) -> CheckResult:
    res = CheckResult(
        "min-line",
        "shortest chord at distance t <= 1/sqrt(n): search lower bound and explicit witnesses",
        True,
        "",
    )
    worst_short = worst_abs = worst_witness = worst_dist = 0.0
    rows = 0
    for n in plan.line_dims:
        for i, t in enumerate(LINE_T_GRID):
            if t > 1.0 / math.sqrt(n) + DISTANCE_TOL:
                continue
            rows += 1
            value = cf.min_line_length(n, t).value
            config = _search_cfg(plan, _seed(seed, res.name, n, i), "minimize", plan.line_starts)
            rep = search_lines_at_distance(n, t, config)
            short = value - min(rep.best_value, rep.extreme_evaluated)
            worst_short = max(worst_short, short)
            worst_abs = max(worst_abs, abs(rep.best_value - value))
            if rep.best_value < value - SEARCH_TOL:
                res.fail(f"n={n} t={t:.6g} search found {rep.best_value!r} < {value!r}")
            if rep.extreme_evaluated < value - OVERSHOOT_TOL:
                res.fail(f"n={n} t={t:.6g} evaluated {rep.extreme_evaluated!r} < {value!r}")
            a, b = cf.min_line_endpoints(n, t)
            w_err = abs(chord_length(a, b - a) - value)
            d_err = abs(line_distance_to_origin(a, b) - t)
            worst_witness = max(worst_witness, w_err)
            worst_dist = max(worst_dist, d_err)
            if w_err > WITNESS_TOL or d_err > DISTANCE_TOL:
                res.fail(f"n={n} t={t:.6g} witness off by {w_err:.3g} (distance {d_err:.3g})")
    res.metrics = {
        "rows": rows,
        "max_undershoot": worst_short,
        "max_abs_gap": worst_abs,
        "max_witness_error": worst_witness,
        "max_distance_error": worst_dist,
    }
    res.summary = (
        f"{rows} rows; search never below formula by more than {_g(max(worst_short, 0.0))}; "
        f"max |search - formula| {_g(worst_abs)}; witness error {_g(worst_witness)}, "
        f"distance error {_g(worst_dist)}"
    )
    return res


def random_feasible_normals(n: int, t: float, count: int, rng) -> np.ndarray:
    """Unit normals whose largest entry is a_1 in (t, 1), rows of a (count, n) array."""
    a1 = rng.uniform(t, 1.0, size=count)
    rest = rng.standard_normal((count, n - 1))
    rest /= np.linalg.norm(rest, axis=1, keepdims=True)
    rest *= np.sqrt(1.0 - a1**2)[:, None]
    return np.column_stack([a1, rest])


def min_h_slack(a: np.ndarray, t: float) -> np.ndarray:
    """Relative slack of a_1^(n-2)(a_1-t)^(n-1) <= (1-t)^(n-1) prod_{i>=2}(a_1^2 - a_i^2)."""
    n = a.shape[1]
    a1 = a[:, 0]
    lhs = a1 ** (n - 2) * (a1 - t) ** (n - 1)
    rhs = (1.0 - t) ** (n - 1) * np.prod(a1[:, None] ** 2 - a[:, 1:] ** 2, axis=1)
    return (rhs - lhs) / rhs


def _axis_distance(normal: np.ndarray) -> float:
    i = int(np.argmax(np.abs(normal)))
    return float(np.linalg.norm(normal - unit_vector(normal.size, i, math.copysign(1.0, normal[i]))))


def check_max_hyperplane(plan: VerifyPlan, seed: int) -> CheckResult:
    res = CheckResult(
        "max-hyperplane",
        "largest section by hyperplanes at distance t > 1/sqrt(2): search and inequality check",
        True,
        "",
    )
    worst_rel = worst_axis = worst_over = 0.0
    min_slack = math.inf
    for n in plan.hyperplane_dims:
        for i, t in enumerate(HYPERPLANE_T_GRID):
            answer = cf.max_hyperplane_volume(n, t)
            value = answer.value
            if abs(hyperplane_section_volume(answer.witness).value - value) > IDENTITY_TOL * value:
                res.fail(f"n={n} t={t} closed-form witness does not reproduce the value")
            config = SearchConfig(
                starts=plan.normal_starts,
                max_iters=plan.line_iters,
                polish=2,
                seed=_seed(seed, res.name, n, i),
            )
            rep = search_hyperplanes_at_distance(n, t, config, "section-volume")
            rel = abs(rep.best_value - value) / value
            axis = _axis_distance(rep.best_witness.normal)
            over = (rep.extreme_evaluated - value) / value
            worst_rel, worst_axis, worst_over = max(worst_rel, rel), max(worst_axis, axis), max(worst_over, over)
            if rel > HYPERPLANE_REL_TOL:
                res.fail(f"n={n} t={t} search best {rep.best_value!r} vs {value!r}")
            if axis > 1e-3:
                res.fail(f"n={n} t={t} best normal {rep.best_witness.normal.tolist()} is not a coordinate direction")
            if over > OVERSHOOT_TOL:
                res.fail(f"n={n} t={t} evaluated {rep.extreme_evaluated!r} > {value!r}")

            rng = make_rng(np.random.SeedSequence(_seed(seed, res.name + "-minh", n, i)))
            slack = min_h_slack(random_feasible_normals(n, t, plan.random_normals_minh, rng), t)
            min_slack = min(min_slack, float(slack.min()))
            if np.any(slack < -IDENTITY_TOL):
                res.fail(f"n={n} t={t} inequality violated, slack {slack.min()!r}")
            at_axis = float(min_h_slack(unit_vector(n, 0)[None, :], t)[0])
            if abs(at_axis) > IDENTITY_TOL:
                res.fail(f"n={n} t={t} inequality not tight at e_1 (slack {at_axis!r})")
    res.metrics = {
        "max_rel_gap": worst_rel,
        "max_axis_distance": worst_axis,
        "max_rel_overshoot": worst_over,
        "min_inequality_slack": min_slack,
    }
    res.summary = (
        f"max relative gap {_g(worst_rel)}, best normals within {_g(worst_axis)} of an axis, "
        f"inequality holds with min relative slack {_g(min_slack)} on "
        f"{plan.random_normals_minh} normals per (n,t)"
    )
    return res


def check_min_slab(plan: VerifyPlan, seed: int) -> CheckResult:
    res = CheckResult(
        "min-slab",
        "slab volume: coordinate normals hit the bound, random normals stay above it",
        True,
        "",
    )
    worst_axis = worst_search = 0.0
    min_margin = math.inf
    for n in plan.hyperplane_dims:
        for i, t in enumerate(HYPERPLANE_T_GRID):
            bound = cf.min_slab_volume(n, t).value
            for j in range(n):
                for sign in (1.0, -1.0):
                    v = slab_volume(SlabSpec(unit_vector(n, j, sign), t)).value
                    worst_axis = max(worst_axis, abs(v - bound))
            rng = make_rng(np.random.SeedSequence(_seed(seed, res.name, n, i)))
            half = plan.random_normals_slab // 2
            normals = np.vstack(
                [
                    random_feasible_normals(n, t, half, rng),
                    rng.standard_normal((plan.random_normals_slab - half, n)),
                ]
            )
            normals /= np.linalg.norm(normals, axis=1, keepdims=True)
            for a in normals:
                margin = slab_volume(SlabSpec(a, t)).value - bound
                min_margin = min(min_margin, margin)
            config = SearchConfig(
                starts=plan.normal_starts,
                max_iters=plan.line_iters,
                polish=2,
                seed=_seed(seed, res.name + "-search", n, i),
                mode="minimize",
            )
            rep = search_hyperplanes_at_distance(n, t, config, "slab-volume")
            worst_search = max(worst_search, abs(rep.best_value - bound) / bound)
    if worst_axis > SLAB_TOL:
        res.fail(f"coordinate normals miss the bound by {worst_axis!r}")
    if min_margin < -OVERSHOOT_TOL:
        res.fail(f"a random normal goes below the bound by {-min_margin!r}")
    if worst_search > HYPERPLANE_REL_TOL:
        res.fail(f"slab search relative gap {worst_search!r}")
    res.metrics = {
        "max_axis_error": worst_axis,
        "min_random_margin": min_margin,
        "max_search_rel_gap": worst_search,
    }
    res.summary = (
        f"coordinate normals within {_g(worst_axis)} of the bound; "
        f"{plan.random_normals_slab} random normals per (n,t) stay above it "
        f"(min margin {_g(min_margin)}); search relative gap {_g(worst_search)}"
    )
    return res


def random_mc_config(n: int, rng):
    """A cap deep enough that 10^5..10^6 samples see it: t in [0.72, 0.76], a_1 >= t + 0.18."""
    t = rng.uniform(0.72, 0.76)
    a1 = rng.uniform(t + 0.18, 1.0)
    rest = rng.standard_normal(n - 1)
    rest *= math.sqrt(1.0 - a1 * a1) / np.linalg.norm(rest)
    a = np.concatenate([[a1], rest])
    a = a[rng.permutation(n)] * rng.choice([-1.0, 1.0], size=n)
    return a, t


def check_monte_carlo(plan: VerifyPlan, seed: int) -> CheckResult:
    res = CheckResult(
        "monte-carlo",
        f"cap, section and slab volumes vs plain Monte Carlo at {MC_SIGMAS:g} sigma",
        True,
        "",
    )
    worst = {"chopped": 0.0, "section": 0.0, "slab": 0.0}
    for n in plan.mc_dims:
        rng = make_rng(np.random.SeedSequence(_seed(seed, res.name, n)))
        for c in range(plan.mc_configs):
            a, t = random_mc_config(n, rng)
            s = _seed(seed, res.name, n, c)
            pairs = {
                "chopped": (chopped_volume(a, t), mc_chopped_volume(a, t, plan.mc_samples, s)),
                "section": (
                    hyperplane_section_volume(HyperplaneSpec(a, t)).value,
                    mc_hyperplane_section_volume(HyperplaneSpec(a, t), plan.mc_samples, s),
                ),
                "slab": (slab_volume(SlabSpec(a, t)).value, mc_slab_volume(a, t, plan.mc_samples, s)),
            }
            for label, (exact, est) in pairs.items():
                z = abs(est.z_score(exact))
                worst[label] = max(worst[label], z)
                if z > MC_SIGMAS:
                    res.fail(
                        f"n={n} config {c} {label}: exact {exact!r}, MC {est.mean!r} "
                        f"+- {est.stderr!r} (|z| = {z:.2f})"
                    )
    res.metrics = {f"max_abs_z_{k}": v for k, v in worst.items()}
    res.metrics["configs"] = plan.mc_configs * len(plan.mc_dims)
    res.metrics["samples"] = plan.mc_samples
    res.summary = (
        f"{plan.mc_configs} configs x n in {list(plan.mc_dims)}, {plan.mc_samples} samples; "
        + ", ".join(f"max |z| {k} {v:.2f}" for k, v in worst.items())
    )
    return res


def check_simplex(plan: VerifyPlan, seed: int) -> CheckResult:
    res = CheckResult(
        "simplex",
        "central line sections of the regular simplex: search and equality cases",
        True,
        "",
    )
    worst_search = worst_exact = 0.0
    for n in plan.simplex_dims:
        lo, hi = cf.simplex_extremes(n)
        for mode, target in (("minimize", lo), ("maximize", hi)):
            config = SearchConfig(
                starts=plan.simplex_starts,
                max_iters=plan.line_iters,
                polish=2,
                seed=_seed(seed, res.name, n, mode == "maximize"),
                mode=mode,
            )
            rep = search_simplex_central_lines(n, config)
            gap = abs(rep.best_value - target)
            worst_search = max(worst_search, gap)
            if gap > SIMPLEX_TOL:
                res.fail(f"n={n} {mode}: search {rep.best_value!r} vs {target!r}")
        exact = []
        for i in range(n):
            for j in range(i + 1, n):
                v = np.zeros(n)
                v[i], v[j] = 1.0, -1.0
                exact.append(simplex_central_line_length(v / math.sqrt(2.0)) - lo)
            v = -np.ones(n)
            v[i] = n - 1.0
            exact.append(simplex_central_line_length(v / np.linalg.norm(v)) - hi)
        for i in range(n - 1):
            exact.append(simplex_chord_through_centroid(unit_vector(n, i)) - hi)
        x = np.zeros(n)
        x[:-1] = 1.0 / (n - 1)
        exact.append(simplex_chord_through_centroid(x) - hi)
        err = float(np.max(np.abs(exact)))
        worst_exact = max(worst_exact, err)
        if err > IDENTITY_TOL:
            res.fail(f"n={n} equality-case witnesses off by {err!r}")
    res.metrics = {"max_search_gap": worst_search, "max_witness_error": worst_exact}
    res.summary = (
        f"n in {list(plan.simplex_dims)}: max |search - formula| {_g(worst_search)}, "
        f"edge/vertex witnesses exact to {_g(worst_exact)}"
    )
    return res


def check_identities(plan: VerifyPlan, seed: int) -> CheckResult:
    res = CheckResult(
        "identities",
        "cap/section identity, diamond chord composition, thresholds, branch agreement",
        True,
        "",
    )
    worst_cap = 0.0
    for n in (3, 4, 5, 6):
        rng = make_rng(np.random.SeedSequence(_seed(seed, res.name, n)))
        ts = rng.uniform(INV_SQRT2 + 1e-3, 0.999, size=plan.random_normals_identity)
        for t in ts:
            a = random_feasible_normals(n, t, 1, rng)[0]
            a = a[rng.permutation(n)] * rng.choice([-1.0, 1.0], size=n)
            cap = chopped_volume(a, t)
            section = hyperplane_section_volume(HyperplaneSpec(a, t)).value
            a1 = vertex_frame(a).canonical[0]
            lhs, rhs = n * cap, section * (a1 - t)
            worst_cap = max(worst_cap, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    if worst_cap > IDENTITY_TOL:
        res.fail(f"n |S| vs |section| (a_1 - t): relative error {worst_cap!r}")

    worst_mk = 0.0
    for n in range(2, 11):
        for k in range(1, n):
            for t in np.linspace(0.0, 1.0 / math.sqrt(n), 17):
                direct = cf.mk(n, k, float(t))
                composed = cf.mk_via_isosceles(n, k, float(t))
                worst_mk = max(worst_mk, abs(direct - composed) / math.ulp(max(direct, 1.0)))
    # "exact" up to the rounding of two different evaluation orders
    if worst_mk > 4:
        res.fail(f"m_k differs from the isosceles chord by {worst_mk} ulp")

    worst_t0 = worst_branch = 0.0
    for n in range(2, 13):
        table = cf.threshold_table(n)
        if not all(x > y for x, y in zip(table.values, table.values[1:])):
            res.fail(f"n={n} thresholds not strictly decreasing: {table.values}")
        worst_t0 = max(worst_t0, abs(table[0] - 1.0 / math.sqrt(n)))
        for k in range(1, n):
            t = table[k]
            left = cf.mk(n, k, t)
            right = cf.mk(n, k + 1, t) if k + 1 < n else 2.0 / math.sqrt(n)
            worst_branch = max(worst_branch, abs(left - right))
    if worst_t0 > THRESHOLD_TOL:
        res.fail(f"T_n(0) differs from 1/sqrt(n) by {worst_t0!r}")
    if worst_branch > IDENTITY_TOL:
        res.fail(f"neighbouring branches disagree at a threshold by {worst_branch!r}")
    res.metrics = {
        "max_cap_identity_rel_error": worst_cap,
        "max_mk_ulp": worst_mk,
        "max_t0_error": worst_t0,
        "max_branch_disagreement": worst_branch,
    }
    res.summary = (
        f"cap identity rel. error {_g(worst_cap)}; m_k composition within {worst_mk:g} ulp; "
        f"|T_n(0) - 1/sqrt(n)| <= {_g(worst_t0)}; branch disagreement {_g(worst_branch)}"
    )
    return res


def _largest_jump(ts, values):
    diffs = np.diff(values)
    i = int(np.argmax(np.abs(diffs)))
    return ts[i], ts[i + 1], float(diffs[i])


def check_discontinuity(plan: VerifyPlan, seed: int) -> CheckResult:
    """Locate the jump of the longest-chord function for n = 3 on [0.70, 0.76]."""
    res = CheckResult(
        "discontinuity-probe",
        "where the longest chord at distance t jumps (n = 3, t in [0.70, 0.76], step 1e-3)",
        None,
        "",
    )
    n = 3
    ts = [round(0.70 + i * 1e-3, 10) for i in range(61)]
    formula = [cf.max_line_length(n, t).value for t in ts]
    searched = []
    for i, t in enumerate(ts):
        config = SearchConfig(
            starts=plan.probe_starts,
            max_iters=plan.line_iters,
            polish=2,
            seed=_seed(seed, res.name, i),
        )
        searched.append(search_lines_at_distance(n, t, config).best_value)
    f_lo, f_hi, f_jump = _largest_jump(ts, formula)
    s_lo, s_hi, s_jump = _largest_jump(ts, searched)
    # one-sided values of the closed form at its two branch points
    eps = 1e-12
    at_edge = (cf.max_line_length(n, INV_SQRT2).value, cf.max_line_length(n, INV_SQRT2 + eps).value)
    at_34 = (cf.max_line_length(n, 0.75).value, cf.max_line_length(n, 0.75 + eps).value)
    i34 = ts.index(0.75)
    search_34 = (searched[i34 - 1], searched[i34], searched[i34 + 1])
    res.metrics = {
        "formula_jump": {"between": [f_lo, f_hi], "size": f_jump},
        "search_jump": {"between": [s_lo, s_hi], "size": s_jump},
        "formula_at_inv_sqrt2": {"left": at_edge[0], "right": at_edge[1]},
        "formula_at_three_quarters": {"left": at_34[0], "right": at_34[1]},
        "search_around_three_quarters": list(search_34),
        "max_search_formula_gap": float(np.max(np.abs(np.subtract(searched, formula)))),
    }
    res.summary = (
        f"search: largest jump {s_jump:+.6f} between t={s_lo:.3f} and t={s_hi:.3f}; "
        f"formula: {f_jump:+.6f} between t={f_lo:.3f} and t={f_hi:.3f}; "
        f"formula at 1/sqrt(2): {at_edge[0]:.9f} -> {at_edge[1]:.9f} (jump), "
        f"at 3/4: {at_34[0]:.9f} -> {at_34[1]:.9f} (continuous); "
        f"search at t=0.749/0.750/0.751: " + "/".join(f"{v:.6f}" for v in search_34)
    )
    return res


CHECKS: Dict[str, Callable[[VerifyPlan, int], CheckResult]] = {
    "max-line": check_max_line,
    "min-line": check_min_line,
    "max-hyperplane": check_max_hyperplane,
    "min-slab": check_min_slab,
    "monte-carlo": check_monte_carlo,
    "simplex": check_simplex,
    "identities": check_identities,
    "discontinuity-probe": check_discontinuity,
}


def manifest(level: str, seed: int, plan: VerifyPlan) -> dict:
    import scipy

    return {
        "tool": "crosspoly",
        "version": __version__,
        "level": level,
        "seed": seed,
        "rng": "numpy PCG64 via SeedSequence",
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "config": asdict(plan),
    }


def run_verification(
    level: str = "quick", seed: int = 42, only: Optional[Sequence[str]] = None
) -> VerifyReport:
    plan = PLANS[level]
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    checks = [CHECKS[name](plan, seed) for name in names]
    return VerifyReport(manifest(level, seed, plan), checks)
