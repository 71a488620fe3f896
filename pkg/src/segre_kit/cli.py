"""Command-line front end: ``segre-kit {verify,decompose,kostant,nijenhuis}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
input errors.  ``--json`` output is deterministic; wall-clock time is only
included with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import _accel
from . import pq_linear as pl
from . import rational as rq
from . import suites
from . import type_decomp as td
from .field import GridSpec, UnknownFamilyError, parse_config, sweep
from .kostant import complex_checks, kostant_harmonics
from .parabolic import build_algebra
from .suites import Check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_N = 5


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return rq.rational_to_json(x)
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if hasattr(x, "__dataclass_fields__"):
        return {k: _jsonable(v) for k, v in vars(x).items()}
    raise TypeError(f"cannot serialise {type(x).__name__}")


def make_report(command: str, inputs: dict, checks: list[Check], dimensions: Optional[dict] = None,
                extra: Optional[dict] = None) -> dict:
    report = {
        "command": command,
        "inputs": inputs,
        "checks": [c.to_json() for c in checks],
        "dimensions": dimensions or {},
        "pass": all(c.passed for c in checks),
    }
    if extra:
        report.update(extra)
    return report


def run_thunks(thunks: Sequence[Callable[[], Check]], workers: Optional[int] = None) -> list[Check]:
    """Run independent checks on a thread pool; results keep submission order."""
    nw = min(_accel.worker_count(workers), max(1, len(thunks)))
    if nw == 1:
        return [t() for t in thunks]
    with ThreadPoolExecutor(max_workers=nw) as pool:
        return list(pool.map(lambda t: t(), thunks))


# ---------------------------------------------------------------------------
# argument helpers


def _check_ns(ns: Sequence[int], unsafe: bool) -> list[int]:
    for n in ns:
        if n < 2:
            raise UsageError(f"n must be at least 2, got {n}")
        if n > MAX_N and not unsafe:
            raise UsageError(f"n={n} exceeds the cap of {MAX_N}; pass --unsafe-n to override")
    return list(ns)


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def parse_structure(name: str, m: Optional[str]) -> pl.EpsilonStructure:
    table = {"j+": 1, "j-": -1, "j0": 0}
    if name in table:
        if m is not None:
            raise UsageError("--m is only used with --structure custom")
        return pl.standard(table[name])
    if name != "custom":
        raise UsageError(f"unknown structure {name!r}")
    if m is None:
        raise UsageError("--structure custom needs --m '[[a, b], [c, -a]]'")
    try:
        rows = json.loads(m)
        block = [[rq.rational_from_json(x) for x in row] for row in rows]
        return pl.make_structure(block)
    except (json.JSONDecodeError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid custom structure: {exc}") from exc


def parse_grid(text: str, dim: int) -> GridSpec:
    """``lo,hi,steps`` for a cube, or a JSON object {"min", "max", "steps"}."""
    try:
        if text.lstrip().startswith("{"):
            g = json.loads(text)
            lo, hi = g["min"], g["max"]
            lo = [lo] * dim if np.isscalar(lo) else lo
            hi = [hi] * dim if np.isscalar(hi) else hi
            grid = GridSpec(tuple(map(float, lo)), tuple(map(float, hi)), int(g["steps"]))
        else:
            lo, hi, steps = text.split(",")
            grid = GridSpec.cube(dim, float(lo), float(hi), int(steps))
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"invalid --grid {text!r}: {exc}") from exc
    if len(grid.min) != dim or len(grid.max) != dim or grid.steps < 1:
        raise UsageError(f"--grid needs {dim} coordinates and at least one step")
    return grid


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> dict:
    ns = _check_ns(args.n or [2, 3], args.unsafe_n)
    try:
        thunks = suites.checks_for(args.scope, ns)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    checks = run_thunks(thunks)
    return make_report("verify", {"scope": args.scope, "n": ns}, checks)


def decompose(phi: td.BilinearMap, A: pl.EpsilonStructure) -> tuple[dict, list[Check]]:
    """Components keyed by type label, with the type identities each one satisfies."""
    s = A.norm_sq
    checks: list[Check] = []
    comps: dict[str, td.BilinearMap] = {}
    if phi.arity == "vector":
        if s != 0:
            p20, p11, p02 = td.pq_parts(phi, A)
            comps = {"(2,0)": p20, "(1,1)": p11, "(0,2)": p02}
            for label, typ in zip(comps, td.TYPES):
                checks.append(Check(f"{label} part has type {label}", "types of W-valued bilinear maps",
                                    td.type_check(comps[label], A, typ)))
            checks.append(Check("parts sum to the input", "type decomposition", p20 + p11 + p02 == phi))
        else:
            p02 = td.part02_nilpotent(phi, A)
            comps = {"(0,2)": p02}
            checks.append(Check("(0,2) part of a nilpotent structure has type (0,2)",
                                "(0,2)-part convention for nilpotent A", td.type_check(p02, A, (0, 2))))
    else:
        if s == 0:
            raise UsageError("scalar maps only decompose for |A|² != 0")
        p11, rest = td.scalar_parts(phi, A)
        comps = {"(1,1)": p11, "(2,0)+(0,2)": rest}
        checks.append(Check("(1,1) part has type (1,1)", "φ(AX,AY) = |A|²φ(X,Y)", td.type_check(p11, A, (1, 1))))
        checks.append(Check("remainder is anti-invariant", "φ(AX,AY) = -|A|²φ(X,Y)",
                            _anti(rest, A)))
    return {k: v.to_json() for k, v in comps.items()}, checks


def _anti(phi: td.BilinearMap, A: pl.EpsilonStructure) -> bool:
    M = A.on_w(phi.n)
    return rq.equal(td._first(td._second(phi.values, M), M), -A.norm_sq * phi.values)


def cmd_decompose(args) -> dict:
    A = parse_structure(args.structure, args.m)
    try:
        phi = td.BilinearMap.from_json(_load_json(args.input))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{args.input}: {exc}") from exc
    comps, checks = decompose(phi, A)
    inputs = {"input": args.input, "structure": args.structure, "m": A.to_json()["m"],
              "n": phi.n, "arity": phi.arity}
    return make_report("decompose", inputs, checks, {"W": phi.dim}, {"components": comps})


def cmd_kostant(args) -> dict:
    n = _check_ns([args.n], args.unsafe_n)[0]
    homs = sorted(set(args.hom or [1, 2]))
    if any(h not in (1, 2, 3) for h in homs):
        raise UsageError("--hom takes homogeneities among 1, 2, 3")
    alg = build_algebra(n)
    dd, ss = complex_checks(alg)
    hs = kostant_harmonics(alg, tuple(homs))
    checks = [
        Check("∂∘∂ = 0", "Lie algebra cohomology differential", dd),
        Check("∂*∘∂* = 0", "Kostant codifferential", ss),
        Check("harmonic values are graded", "harmonic curvature by homogeneity", hs.values_graded),
    ]
    extra: dict = {}
    if 1 in homs:
        if n == 2:
            checks.append(Check("homogeneity-1 harmonic part vanishes for n=2", "torsion is absent when n=2",
                                hs.dimensions[1] == 0))
        else:
            checks.append(Check("torsion is trace-free", "kernel of all traces", bool(hs.torsion_trace_free)))
            checks.append(Check("torsion has the tabulated symmetry type", "torsion representation",
                                bool(hs.torsion_symmetry_type)))
            checks.append(Check("torsion dimension matches the rank-count oracle", "torsion representation",
                                hs.dimensions[1] == hs.torsion_oracle_dimension,
                                {"oracle": hs.torsion_oracle_dimension}))
        extra["trace_free"] = hs.torsion_trace_free
        extra["symmetry_type"] = hs.torsion_symmetry_type
    if n == 2 and 2 in homs:
        checks.append(Check("homogeneity-2 splits into K1 and K2", "two curvature components for n=2",
                            bool(hs.k_split_ok), dict(hs.k_split or {})))
        extra["k_split"] = dict(hs.k_split or {})
    dims = {f"hom-{h}": d for h, d in sorted(hs.dimensions.items())}
    return make_report("kostant", {"n": n, "hom": homs}, checks, dims, extra)


def cmd_nijenhuis(args) -> dict:
    cfg = _load_json(args.config)
    try:
        fld, grid, h = parse_config(cfg)
    except UnknownFamilyError as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(f"{args.config}: {exc}") from exc
    if args.h is not None:
        if not args.h > 0:
            raise UsageError("--h must be positive")
        h = args.h
    if args.grid is not None:
        grid = parse_grid(args.grid, fld.dim)
    summary = sweep(fld, grid, h)
    checks = [Check(name, "N_A := ½[A,A] and Frobenius integrability", ok) for name, ok in summary.verdicts.items()]
    inputs = {"family": fld.family, "n": fld.n, "params": list(fld.params), "h": h,
              "grid": {"min": list(grid.min), "max": list(grid.max), "steps": grid.steps}}
    return make_report("nijenhuis", inputs, checks, {"points": summary.points},
                       {"summary": summary.to_json()})


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")
    common.add_argument("--unsafe-n", action="store_true", help=f"allow n above {MAX_N}")

    p = argparse.ArgumentParser(prog="segre-kit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    v.add_argument("scope", choices=suites.SCOPES)
    v.add_argument("--n", type=int, nargs="+", help="values of n (default: 2 3)")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", parents=[common], help="split a bilinear map into type components")
    d.add_argument("--input", required=True, help="BilinearMap JSON file, or - for stdin")
    d.add_argument("--structure", default="j-", choices=["j+", "j-", "j0", "custom"])
    d.add_argument("--m", help="2x2 trace-free block as JSON, entries int or 'p/q'")
    d.set_defaults(func=cmd_decompose)

    k = sub.add_parser("kostant", parents=[common], help="harmonic curvature dimensions")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--hom", type=int, nargs="+", help="homogeneities to compute (default: 1 2)")
    k.set_defaults(func=cmd_kostant)

    nj = sub.add_parser("nijenhuis", parents=[common], help="sweep a structure field on a grid")
    nj.add_argument("--config", required=True, help="field config JSON file, or - for stdin")
    nj.add_argument("--h", type=float, help="finite-difference step")
    nj.add_argument("--grid", help="'lo,hi,steps' or a JSON object with min, max, steps")
    nj.set_defaults(func=cmd_nijenhuis)
    return p


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: {'PASS' if report['pass'] else 'FAIL'}"]
    for c in report["checks"]:
        lines.append(f"  [{'pass' if c['pass'] else 'FAIL'}] {c['name']}  ({c['anchor']})")
    for key, val in report["dimensions"].items():
        lines.append(f"  {key} = {val}")
    if "elapsed" in report:
        lines.append(f"  elapsed {report['elapsed']:.2f} s")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"segre-kit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.timing:
        report["elapsed"] = time.perf_counter() - start
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False, default=_jsonable))
    else:
        print(render_text(report))
    return EXIT_OK if report["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
