"""Command-line front end.

    pellet analyze POLY.json (--k K | --all-k) [--verify] [--json] [--trace]
    pellet verify  POLY.json (--k K | --all-k) [--json]
    pellet matrix  MATPOLY.json (--k K | --all-k) --norm {one,inf,two}
    pellet curves  POLY.json --k K [--xbar X] --grid a:b:steps

Exit codes: 0 success (including "no separation"), 2 bad input, 3
numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .detection import DEFAULT_TOL, Existence, detect
from .errors import ConvergenceError, InvalidInputError, PelletError
from .matrix import (
    NormKind,
    analyze_matrix_k,
    matrix_candidate_ks,
    matrix_polynomial_from_json,
)
from .oracle import (
    all_roots,
    count_in_annulus,
    count_in_disk,
    count_outside_disk,
    det_polynomial,
    reference_radii,
)
from .poly import Polynomial, eval_phi, make_polynomial, pellet_instance, polynomial_from_json
from .polygon import analyze_k, candidate_ks
from .solver import fit_surrogate, fit_trinomial

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

# relative slack on the radii when counting oracle roots
COUNT_SLACK = 1e-8


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    return data, hashlib.sha256(raw).hexdigest()


def _load_poly(path: str) -> tuple[Polynomial, str]:
    data, digest = _read_json(path)
    try:
        return polynomial_from_json(data), digest
    except InvalidInputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _verification(p: Polynomial, res, roots) -> dict:
    ann = res.annulus
    out = {
        "oracle": "aberth",
        "converged": roots.converged,
        "residual": roots.residual,
        "inside": count_in_disk(roots, ann.r, COUNT_SLACK),
        "outside": count_outside_disk(roots, ann.R, COUNT_SLACK),
        "in_annulus": count_in_annulus(roots, ann.r, ann.R, COUNT_SLACK),
        "expected_inside": ann.zero_count,
        "expected_outside": len(roots) - ann.zero_count,
    }
    out["ok"] = bool(
        roots.converged
        and out["inside"] == out["expected_inside"]
        and out["outside"] == out["expected_outside"]
        and out["in_annulus"] == 0
    )
    return out


def _result_json(res, trace: bool) -> dict:
    return {
        "k": res.k,
        "detection": None if res.detection is None else res.detection.to_json(),
        "annulus": None if res.annulus is None else res.annulus.to_json(trace),
        "error": res.error,
        "error_kind": res.error_kind,
    }


def _exit_code(results, explicit_k: bool) -> int:
    for res in results:
        if res.error_kind == ConvergenceError.__name__:
            return EXIT_NUMERIC
        if explicit_k and res.error is not None:
            return EXIT_INPUT if res.error_kind == InvalidInputError.__name__ else EXIT_NUMERIC
    return EXIT_OK


def _print_human(report: dict, out) -> None:
    inp = report["input"]
    head = f"pellet {report['command']} {inp['path']}  (degree {inp['degree']}"
    if "m" in inp:
        head += f", m={inp['m']}, norm={report['norm']}"
    print(head + f", tol {report['tol']:g})", file=out)
    if report.get("candidates") is not None:
        print(f"Newton-polygon candidates: {report['candidates'] or 'none'}", file=out)
    for item in report["results"]:
        k = item["k"]
        det = item["detection"]
        if det is None:
            print(f"k={k}: error: {item['error']}", file=out)
            continue
        print(
            f"k={k}: exists={det['exists']}  x*={det['x_star']:.12g} ({det['chi_newton_steps']} Newton steps)"
            f"  threshold={det['threshold']:.12g}  margin={det['margin']:.6g}",
            file=out,
        )
        ann = item["annulus"]
        if ann is not None:
            print(
                f"     r={ann['r']:.15g}  R={ann['R']:.15g}"
                f"  outer r/R={ann['outer_iterations_r']}/{ann['outer_iterations_R']}"
                f"  inner r={ann['inner_counts_r']} R={ann['inner_counts_R']}",
                file=out,
            )
            print(f"     claim: {ann['zero_count']} zeros in |z| <= r, none in r < |z| < R", file=out)
        if item["error"]:
            print(f"     error: {item['error']}", file=out)
        ver = item.get("verification")
        if ver:
            if "skipped" in ver:
                print(f"     verify: skipped ({ver['skipped']})", file=out)
            else:
                flag = "ok" if ver["ok"] else "MISMATCH"
                print(
                    f"     verify: {ver['inside']} inside, {ver['outside']} outside,"
                    f" {ver['in_annulus']} in annulus  [{flag}]",
                    file=out,
                )
    print(f"time: {report['timing_s']:.4f} s", file=out)


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _print_human(report, sys.stdout)
    for item in report["results"]:
        if item["error"]:
            print(f"error: k={item['k']}: {item['error']}", file=sys.stderr)


def cmd_analyze(args) -> int:
    p, digest = _load_poly(args.file)
    t0 = time.perf_counter()
    if args.all_k:
        try:
            cands = list(candidate_ks(p).candidates)
        except InvalidInputError as exc:
            raise InputError(str(exc)) from exc
        ks = [k for k in cands if p.coefficients[k] != 0]
    else:
        cands = None
        ks = [args.k]
    results = [analyze_k(p, k, args.tol, args.max_iter) for k in ks]
    items = [_result_json(res, args.trace) for res in results]
    if args.verify and any(res.annulus is not None for res in results):
        roots = all_roots(p)
        for res, item in zip(results, items):
            if res.annulus is None:
                continue
            item["verification"] = _verification(p, res, roots)
            inst = pellet_instance(p, res.k)
            r_ref, R_ref = reference_radii(inst, res.annulus.x_start)
            item["verification"]["bisection"] = {"r": r_ref, "R": R_ref}
    report = {
        "tool": "pellet",
        "version": __version__,
        "command": args.command,
        "input": {"path": str(args.file), "sha256": digest, "degree": p.degree},
        "tol": args.tol,
        "candidates": cands,
        "results": items,
        "timing_s": time.perf_counter() - t0,
    }
    _emit(report, args.json)
    return _exit_code(results, not args.all_k)


def cmd_matrix(args) -> int:
    data, digest = _read_json(args.file)
    try:
        P = matrix_polynomial_from_json(data)
    except InvalidInputError as exc:
        raise InputError(f"{args.file}: {exc}") from exc
    kind = NormKind(args.norm)
    t0 = time.perf_counter()
    if args.all_k:
        cands = list(matrix_candidate_ks(P, kind))
        ks = cands
    else:
        cands = None
        ks = [args.k]
    results = [analyze_matrix_k(P, k, kind, args.tol, args.max_iter) for k in ks]
    items = [_result_json(res, args.trace) for res in results]
    if args.verify and any(res.annulus is not None for res in results):
        det = make_polynomial(det_polynomial(P.matrices))
        roots = all_roots(det)
        for res, item in zip(results, items):
            if res.annulus is not None:
                ver = _verification(det, res, roots)
                # infinite eigenvalues (singular A_n) drop out of det P
                ver["expected_outside"] = det.degree - res.annulus.zero_count
                ver["ok"] = bool(
                    roots.converged
                    and ver["inside"] == ver["expected_inside"]
                    and ver["outside"] == ver["expected_outside"]
                    and ver["in_annulus"] == 0
                )
                item["verification"] = ver
    report = {
        "tool": "pellet",
        "version": __version__,
        "command": "matrix",
        "norm": kind.value,
        "input": {"path": str(args.file), "sha256": digest, "degree": P.n, "m": P.m},
        "tol": args.tol,
        "candidates": cands,
        "results": items,
        "timing_s": time.perf_counter() - t0,
    }
    _emit(report, args.json)
    if args.all_k:
        # singular A_k only disqualifies that k
        return EXIT_NUMERIC if any(r.error_kind == ConvergenceError.__name__ for r in results) else EXIT_OK
    return _exit_code(results, True)


def _parse_grid(text: str) -> np.ndarray:
    try:
        a, b, steps = text.split(":")
        a, b, steps = float(a), float(b), int(steps)
    except ValueError as exc:
        raise InputError(f"--grid must look like a:b:steps, got {text!r}") from exc
    if not (0 <= a < b) or steps < 2:
        raise InputError("--grid needs 0 <= a < b and at least 2 steps")
    return np.linspace(a, b, steps)


def cmd_curves(args) -> int:
    p, _ = _load_poly(args.file)
    try:
        inst = pellet_instance(p, args.k)
    except InvalidInputError as exc:
        raise InputError(str(exc)) from exc
    grid = _parse_grid(args.grid)
    xbar = args.xbar
    if xbar is None:
        det = detect(inst, args.tol)
        xbar = det.x_star if det.exists is Existence.YES else None
    tri = sur = None
    if xbar is not None:
        if not xbar > 0 or eval_phi(inst, xbar)[0] > 0:
            raise InputError(f"x_bar={xbar} is invalid: phi(x_bar) > 0")
        tri = fit_trinomial(inst, xbar)
        sur = fit_surrogate(tri, xbar)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(["x", "phi", "f", "h"])
        for x in grid:
            x = float(x)
            row = [repr(x), repr(eval_phi(inst, x)[0])]
            if tri is None:
                row += ["", ""]
            else:
                h = sur(x)
                row += [repr(tri(x)), "pole" if math.isinf(h) else repr(h)]
            w.writerow(row)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _add_common(sp, need_norm: bool = False) -> None:
    sp.add_argument("file", help="input JSON file")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="index k to analyze")
    group.add_argument("--all-k", action="store_true", help="analyze every Newton-polygon candidate")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance (default 1e-12)")
    sp.add_argument("--max-iter", type=int, default=None, help="cap on outer and inner iterations")
    sp.add_argument("--json", action="store_true", help="emit the JSON report")
    sp.add_argument("--trace", action="store_true", help="include iterate sequences")
    sp.add_argument("--verify", action="store_true", help="certify the zero counts with the root oracle")
    if need_norm:
        sp.add_argument("--norm", choices=[k.value for k in NormKind], default="one", help="induced norm")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pellet", description="Pellet annulus bounds for polynomial zeros")
    parser.add_argument("--version", action="version", version=f"pellet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="detection and annulus radii for a scalar polynomial")
    _add_common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", help="analyze with oracle verification")
    _add_common(sp)
    sp.set_defaults(func=cmd_analyze, verify=True)

    sp = sub.add_parser("matrix", help="generalized Pellet bounds for a matrix polynomial")
    _add_common(sp, need_norm=True)
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("curves", help="CSV samples of phi, f and h")
    sp.add_argument("file")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--xbar", type=float, default=None, help="fit point (default: x* when phi has roots)")
    sp.add_argument("--grid", required=True, help="a:b:steps")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--output", default=None, help="write CSV here instead of stdout")
    sp.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "verify":
        args.verify = True
    if getattr(args, "tol", DEFAULT_TOL) <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PelletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
