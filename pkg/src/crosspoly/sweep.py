"""(n, t) sweeps of the extremal formulas, emitted as CSV or JSON for plotting.

Rows are produced in (n, t) order.  Values that a quantity does not define
at a grid point are emitted with status ``out-of-regime`` and empty value
fields rather than dropped.  Floats are written with 17 significant digits,
so a parsed file re-emits byte-identically.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, replace
from typing import List, Optional, Sequence, Tuple

from . import __version__
from . import closed_forms as cf
from .core import CrossPolytopeError, HyperplaneSpec, canonicalize_line
from .montecarlo import mc_hyperplane_section_volume, mc_slab_volume
from .search import (
    SearchConfig,
    search_edge_pair_lines,
    search_hyperplanes_at_distance,
    search_lines_at_distance,
    search_simplex_central_lines,
)

QUANTITIES = ("max-line", "min-line", "max-hyp", "min-slab", "simplex-min", "simplex-max")
FORMATS = ("csv", "json")
CSV_COLUMNS = ("quantity", "n", "t", "branch", "closed_form", "oracle_value", "gap", "status")
CERTIFY_TOL = 1e-5
MC_SIGMAS = 3.0


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    dims: Tuple[int, ...]
    t_start: float = 0.0
    t_stop: float = 1.0
    t_step: float = 0.05
    certify: bool = False
    fmt: str = "csv"
    seed: int = 42
    starts: int = 32
    mc_samples: int = 1_000_000

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise CrossPolytopeError(f"quantity must be one of {QUANTITIES}")
        if self.fmt not in FORMATS:
            raise CrossPolytopeError(f"format must be one of {FORMATS}")
        if not self.t_step > 0:
            raise CrossPolytopeError("t step must be positive")
        if self.t_stop < self.t_start:
            raise CrossPolytopeError("t stop must not be below t start")
        if not self.dims or min(self.dims) < 1:
            raise CrossPolytopeError("dimensions must be positive integers")

    @property
    def t_values(self) -> List[Optional[float]]:
        if self.quantity.startswith("simplex"):
            return [None]
        count = int(math.floor((self.t_stop - self.t_start) / self.t_step + 1e-9))
        return [round(self.t_start + k * self.t_step, 12) for k in range(count + 1)]


@dataclass(frozen=True)
class SweepRow:
    quantity: str
    n: int
    t: Optional[float]
    branch: str
    closed_form: Optional[float]
    oracle_value: Optional[float]
    gap: Optional[float]
    status: str
    # where the oracle value came from; kept in the manifest, not in the CSV
    provenance: str = "closed-form"


def parse_dims(text: str) -> Tuple[int, ...]:
    """``"3"`` or an inclusive range ``"2:5"``."""
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            return tuple(range(lo, hi + 1))
        return (int(text),)
    except ValueError:
        raise CrossPolytopeError(f"bad dimension spec {text!r}, expected N or LO:HI") from None


def load_config(path: str) -> dict:
    """Read the ``[sweep]`` section of an INI-style file into SweepSpec keywords."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise CrossPolytopeError(f"cannot read config file {path!r}")
    if "sweep" not in parser:
        raise CrossPolytopeError(f"{path!r} has no [sweep] section")
    sec = parser["sweep"]
    out = {}
    if "quantity" in sec:
        out["quantity"] = sec["quantity"]
    if "n" in sec:
        out["dims"] = parse_dims(sec["n"])
    for key in ("t_start", "t_stop", "t_step"):
        if key in sec:
            out[key] = sec.getfloat(key)
    for key in ("seed", "starts", "mc_samples"):
        if key in sec:
            out[key] = sec.getint(key)
    if "certify" in sec:
        out["certify"] = sec.getboolean("certify")
    if "format" in sec:
        out["fmt"] = sec["format"]
    return out


def _closed_form(quantity: str, n: int, t: Optional[float]) -> cf.ExtremalAnswer:
    if quantity == "max-line":
        return cf.max_line_length(n, t)
    if quantity == "min-line":
        return cf.min_line_length(n, t)
    if quantity == "max-hyp":
        return cf.max_hyperplane_volume(n, t)
    if quantity == "min-slab":
        return cf.min_slab_volume(n, t)
    lo, hi = cf.simplex_extremes(n)
    centroid = [1.0 / n] * n
    if quantity == "simplex-min":
        line = canonicalize_line(centroid, direction=cf.simplex_min_direction(n))
        return cf.ExtremalAnswer(lo, "edge-direction", line)
    line = canonicalize_line(centroid, direction=cf.simplex_max_direction(n))
    return cf.ExtremalAnswer(hi, "vertex-direction", line)


def _oracle(spec: SweepSpec, n: int, t: Optional[float], value: float, index: int):
    """(oracle value, agrees, provenance) for one grid point."""
    config = SearchConfig(starts=spec.starts, max_iters=300, polish=4, seed=(spec.seed, n, index))
    q = spec.quantity
    if q == "max-line":
        best = max(
            search_lines_at_distance(n, t, config).best_value,
            search_edge_pair_lines(n, t).best_value,
        )
        return best, abs(best - value) <= CERTIFY_TOL, "search"
    if q == "min-line":
        best = search_lines_at_distance(n, t, replace(config, mode="minimize")).best_value
        return best, abs(best - value) <= CERTIFY_TOL, "search"
    if q in ("max-hyp", "min-slab") and t >= 1.0:
        # the search parameterization needs t < 1; at t = 1 only sampling applies
        if q == "max-hyp":
            a = cf.max_hyperplane_volume(n, t).witness.normal
            h = HyperplaneSpec(a, t)
            est = mc_hyperplane_section_volume(h, spec.mc_samples, (spec.seed, n, index))
        else:
            a = cf.min_slab_volume(n, t).witness.normal
            est = mc_slab_volume(a, t, spec.mc_samples, (spec.seed, n, index))
        return est.mean, est.agrees(value, MC_SIGMAS), "monte-carlo"
    if q == "max-hyp":
        best = search_hyperplanes_at_distance(n, t, config, "section-volume").best_value
        return best, abs(best - value) <= CERTIFY_TOL * max(value, 1.0), "search"
    if q == "min-slab":
        best = search_hyperplanes_at_distance(
            n, t, replace(config, mode="minimize"), "slab-volume"
        ).best_value
        return best, abs(best - value) <= CERTIFY_TOL * max(value, 1.0), "search"
    mode = "minimize" if q == "simplex-min" else "maximize"
    best = search_simplex_central_lines(n, replace(config, mode=mode)).best_value
    return best, abs(best - value) <= CERTIFY_TOL, "search"


def run_sweep(spec: SweepSpec) -> List[SweepRow]:
    rows = []
    for n in spec.dims:
        for i, t in enumerate(spec.t_values):
            try:
                answer = _closed_form(spec.quantity, n, t)
            except CrossPolytopeError:
                rows.append(SweepRow(spec.quantity, n, t, "", None, None, None, "out-of-regime", "none"))
                continue
            if not spec.certify:
                rows.append(SweepRow(spec.quantity, n, t, answer.branch, answer.value, None, None, "ok"))
                continue
            oracle, agrees, provenance = _oracle(spec, n, t, answer.value, i)
            rows.append(
                SweepRow(
                    spec.quantity,
                    n,
                    t,
                    answer.branch,
                    answer.value,
                    oracle,
                    oracle - answer.value,
                    "certified" if agrees else "mismatch",
                    provenance,
                )
            )
    return rows


def source_timestamp() -> Optional[int]:
    """SOURCE_DATE_EPOCH if set; otherwise no timestamp, so output stays reproducible."""
    value = os.environ.get("SOURCE_DATE_EPOCH")
    return int(value) if value else None


def sweep_manifest(spec: SweepSpec, rows: Sequence[SweepRow]) -> dict:
    config = asdict(spec)
    config["dims"] = list(spec.dims)
    return {
        "tool": "crosspoly",
        "version": __version__,
        "seed": spec.seed,
        "config": config,
        "timestamp": source_timestamp(),
        "columns": list(CSV_COLUMNS),
        "provenance": [
            {
                "n": r.n,
                "t": r.t,
                "closed_form": "closed-form" if r.closed_form is not None else "none",
                "oracle": r.provenance if r.oracle_value is not None else "none",
            }
            for r in rows
        ],
    }


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _num(text: str) -> Optional[float]:
    return float(text) if text != "" else None


def write_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def read_csv(text: str) -> List[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise CrossPolytopeError(f"unexpected CSV header {reader.fieldnames}")
    return [
        SweepRow(
            quantity=rec["quantity"],
            n=int(rec["n"]),
            t=_num(rec["t"]),
            branch=rec["branch"],
            closed_form=_num(rec["closed_form"]),
            oracle_value=_num(rec["oracle_value"]),
            gap=_num(rec["gap"]),
            status=rec["status"],
        )
        for rec in reader
    ]


def write_json(spec: SweepSpec, rows: Sequence[SweepRow]) -> str:
    doc = {
        "manifest": sweep_manifest(spec, rows),
        "rows": [{c: getattr(r, c) for c in CSV_COLUMNS} for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"

