"""Command-line front end: ``crosspoly compute | sweep | verify``.

Exit codes: 0 success, 1 verification failure (or a sweep row that does not
certify), 2 usage or regime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .core import (
    CrossPolytopeError,
    HyperplaneSpec,
    SectionResult,
    SlabSpec,
    canonicalize_line,
    check_unit,
)
from .exact import (
    chopped_volume,
    hyperplane_section_volume,
    line_section_length,
    simplex_central_line_length,
    simplex_chord_through_centroid,
    slab_volume,
)
from .sweep import (
    QUANTITIES,
    SweepSpec,
    load_config,
    parse_dims,
    run_sweep,
    sweep_manifest,
    write_csv,
    write_json,
)
from .verify import CHECKS, PLANS, run_verification

SEED_ENV = "CROSSPOLY_SEED"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _coords(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise CrossPolytopeError(f"expected comma-separated numbers, got {text!r}") from None


def _unit(text: str) -> np.ndarray:
    v = _coords(text)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise CrossPolytopeError("vector must be nonzero")
    return v / norm


def _default_seed() -> int:
    value = os.environ.get(SEED_ENV)
    try:
        return int(value) if value else 42
    except ValueError:
        raise CrossPolytopeError(f"{SEED_ENV} must be an integer, got {value!r}") from None


def _check_n(args, dim: int) -> None:
    if args.n is not None and args.n != dim:
        raise CrossPolytopeError(f"--n {args.n} does not match the {dim} coordinates given")


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise CrossPolytopeError(f"missing {', '.join(missing)}")


def _compute(args) -> SectionResult:
    what = args.what
    if what == "line-length":
        if args.p1 is not None or args.p2 is not None:
            _need(args, "p1", "p2")
            line = canonicalize_line(_coords(args.p1), _coords(args.p2))
        else:
            _need(args, "base", "direction")
            line = canonicalize_line(_coords(args.base), direction=_coords(args.direction))
        _check_n(args, line.dim)
        return line_section_length(line)
    if what in ("hyp-volume", "slab-volume", "chopped-volume"):
        _need(args, "normal", "t")
        a = _unit(args.normal)
        _check_n(args, a.size)
        if what == "hyp-volume":
            return hyperplane_section_volume(HyperplaneSpec(a, args.t))
        if what == "slab-volume":
            return slab_volume(SlabSpec(a, args.t))
        return SectionResult(chopped_volume(a, args.t), "exact-geometry", witness=HyperplaneSpec(a, args.t))
    # simplex-chord: a central direction, or a boundary point on conv{e_1..e_(n-1)}
    if args.point is not None:
        x = _coords(args.point)
        _check_n(args, x.size)
        return SectionResult(simplex_chord_through_centroid(x), "exact-geometry")
    _need(args, "direction")
    v = _unit(args.direction)
    check_unit(v, "direction")
    _check_n(args, v.size)
    centroid = np.full(v.size, 1.0 / v.size)
    return SectionResult(
        simplex_central_line_length(v), "exact-geometry", witness=canonicalize_line(centroid, direction=v)
    )


def _result_dict(res: SectionResult) -> dict:
    out = {"value": res.value, "method": res.method, "tangent": res.tangent}
    if res.witness is not None:
        out["witness"] = res.witness.to_dict()
    if res.notes:
        out["notes"] = res.notes
    return out


def cmd_compute(args) -> int:
    res = _compute(args)
    if args.json:
        print(json.dumps(_result_dict(res), sort_keys=True))
        return EXIT_OK
    print(f"value    {res.value:.17g}")
    print(f"method   {res.method}")
    print(f"tangent  {str(res.tangent).lower()}")
    if res.witness is not None:
        print(f"witness  {json.dumps(res.witness.to_dict())}")
    for key, val in res.notes.items():
        print(f"{key}  {json.dumps(val)}")
    return EXIT_OK


def _sweep_spec(args) -> SweepSpec:
    kw = load_config(args.config) if args.config else {}
    if args.quantity is not None:
        kw["quantity"] = args.quantity
    if args.n is not None:
        kw["dims"] = parse_dims(args.n)
    for key in ("t_start", "t_stop", "t_step", "starts", "mc_samples"):
        if getattr(args, key) is not None:
            kw[key] = getattr(args, key)
    if args.certify:
        kw["certify"] = True
    if args.format is not None:
        kw["fmt"] = args.format
    kw["seed"] = args.seed if args.seed is not None else kw.get("seed", _default_seed())
    for key in ("quantity", "dims"):
        if key not in kw:
            raise CrossPolytopeError(f"--{'n' if key == 'dims' else key} is required (flag or config file)")
    return SweepSpec(**kw)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    rows = run_sweep(spec)
    if spec.fmt == "json":
        _emit(write_json(spec, rows), args.output)
    else:
        _emit(write_csv(rows), args.output)
        manifest = json.dumps(sweep_manifest(spec, rows), indent=2) + "\n"
        if args.output:
            _emit(manifest, args.output + ".manifest.json")
        else:
            sys.stderr.write(manifest)
    return EXIT_FAIL if any(r.status == "mismatch" for r in rows) else EXIT_OK


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    report = run_verification(args.level, seed, args.only)
    text = report.to_json() if args.format == "json" else report.to_text()
    _emit(text, args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosspoly",
        description="Sections of the cross-polytope B_1^n by lines, hyperplanes and slabs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="one exact section length or volume")
    p.add_argument(
        "what",
        choices=["line-length", "hyp-volume", "slab-volume", "chopped-volume", "simplex-chord"],
    )
    p.add_argument("--n", type=int, help="dimension (checked against the coordinates)")
    p.add_argument("--p1", help="first point on the line")
    p.add_argument("--p2", help="second point on the line")
    p.add_argument("--base", help="a point on the line")
    p.add_argument("--direction", help="line direction (normalized on input)")
    p.add_argument("--normal", help="hyperplane / slab normal (normalized on input)")
    p.add_argument("--t", type=float, help="distance of the hyperplane, half-width of the slab")
    p.add_argument("--point", help="simplex-chord: boundary point on conv{e_1..e_(n-1)}")
    p.add_argument("--json", action="store_true", help="print the result as JSON")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="closed forms over an (n, t) grid, optionally certified")
    p.add_argument("--quantity", choices=QUANTITIES)
    p.add_argument("--n", help="dimension N or inclusive range LO:HI")
    p.add_argument("--t-start", type=float)
    p.add_argument("--t-stop", type=float)
    p.add_argument("--t-step", type=float)
    p.add_argument("--certify", action="store_true", help="also run the search / Monte Carlo oracle")
    p.add_argument("--starts", type=int, help="search starts per row when certifying")
    p.add_argument("--mc-samples", type=int, help="Monte Carlo samples where sampling is used")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 42")
    p.add_argument("--config", help="INI file with a [sweep] section")
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the certification suite")
    p.add_argument("--level", choices=sorted(PLANS), default="quick")
    p.add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 42")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--only", action="append", choices=list(CHECKS), help="run only this check (repeatable)")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_verify)
    return parser


VALUE_FLAGS = ("--p1", "--p2", "--base", "--direction", "--normal", "--point", "--t")


def _bind_negative_values(argv: Sequence[str]) -> list:
    """Rewrite ``--p2 -1,0,0`` as ``--p2=-1,0,0``.

    argparse only recognizes plain negative numbers as values, not
    comma-separated coordinate lists starting with a minus sign.
    """
    out = []
    it = iter(argv)
    for token in it:
        if token in VALUE_FLAGS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_bind_negative_values(argv))
    try:
        return args.func(args)
    except CrossPolytopeError as exc:
        print(f"crosspoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
