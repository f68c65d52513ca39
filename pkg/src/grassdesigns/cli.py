"""Command-line front end.

Exit codes: 0 success, 1 verification failure (gap above tolerance),
2 input error. Input errors are reported on stderr as one JSON object per
line with the offending line/column (JSON syntax) or path (schema).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .families import FAMILIES, FAMILY_STRENGTH, PreconditionError, table1_fixtures
from .geometry import DegenerateFrameError, Projector, projector_from_frame, random_projector, random_symmetric
from .kernels import intertwining, k_hom, p_pi, reproducing_kernel_poly, vanishing_kernel
from .optimizer import NumericalFailure, OptimizerSettings, minimize_with_restarts
from .partitions import Partition, enumerate_partitions
from .potential import Configuration, certify
from .repdim import dim_irrep, dim_pol_union, multiplicity
from .zonal import SignedMeasure, lower_bound

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str | None = None):
        super().__init__(message)
        self.line, self.column, self.path = line, column, path

    def diagnostic(self) -> dict:
        return {"error": "input", "message": str(self), "line": self.line, "column": self.column, "path": self.path}


# ---------------------------------------------------------------- flag parsing

def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a number or p/q fraction: {text!r}") from exc


def parse_ranks(text: str) -> list[int]:
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as exc:
        raise InputError(f"ranks must be comma-separated integers: {text!r}") from exc


def parse_rank_map(text: str, value=parse_fraction) -> dict[int, Any]:
    """Parse ``"1:1,2:5/3"`` into {1: 1, 2: 5/3}."""
    out: dict[int, Any] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition(":")
        if not sep:
            raise InputError(f"expected rank:value, got {item!r}")
        try:
            k = int(key)
        except ValueError as exc:
            raise InputError(f"rank must be an integer, got {key!r}") from exc
        if k in out:
            raise InputError(f"rank {k} given twice")
        out[k] = value(val)
    if not out:
        raise InputError("empty rank map")
    return out


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise InputError(f"expected an integer, got {text!r}") from exc


# ---------------------------------------------------------------- JSON formats

def _point_lines(text: str) -> list[int]:
    """1-based line on which each element of the top-level "points" array starts."""
    lines: list[int] = []
    depth, line, in_str, esc = 0, 1, False, False
    last_key, in_points, points_depth = None, False, -1
    buf: list[str] = []
    for ch in text:
        if ch == "\n":
            line += 1
        if in_str:
            if esc:
                esc = False
            elif ch == "\\":
                esc = True
            elif ch == '"':
                in_str = False
                last_key = "".join(buf)
            else:
                buf.append(ch)
            continue
        if ch == '"':
            in_str, buf = True, []
        elif ch in "[{":
            if ch == "[" and depth == 1 and last_key == "points":
                in_points, points_depth = True, depth + 1
            elif in_points and depth == points_depth:
                lines.append(line)
            depth += 1
        elif ch in "]}":
            depth -= 1
            if in_points and depth < points_depth:
                in_points = False
    return lines


def config_to_json(config: Configuration, report=None) -> dict:
    doc: dict[str, Any] = {
        "d": config.d,
        "points": [
            {"rank": P.k, "matrix": P.mat.tolist(), "weight": float(w)}
            for P, w in zip(config.points, config.weights)
        ],
        "meta": config.meta,
    }
    if report is not None:
        doc["report"] = report.to_dict()
    return doc


def config_from_json(text: str) -> Configuration:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise InputError("configuration must be a JSON object", path="$")
    d = doc.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise InputError("'d' must be an integer >= 2", path="$.d")
    pts = doc.get("points")
    if not isinstance(pts, list) or not pts:
        raise InputError("'points' must be a non-empty list", path="$.points")
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise InputError("'meta' must be an object", path="$.meta")
    lines = _point_lines(text)
    points, weights = [], []
    for i, item in enumerate(pts):
        path, line = f"$.points[{i}]", lines[i] if i < len(lines) else None
        try:
            P, w = _point_from_json(d, item)
        except InputError as exc:
            raise InputError(str(exc), line, None, path + (exc.path or "")) from exc
        points.append(P)
        weights.append(w)
    return Configuration(points, weights, meta)


def _point_from_json(d: int, item) -> tuple[Projector, float]:
    if not isinstance(item, dict):
        raise InputError("point must be an object")
    k = item.get("rank")
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= d - 1:
        raise InputError(f"'rank' must be an integer in 1..{d - 1}", path=".rank")
    w = item.get("weight", 1.0)
    if isinstance(w, str):
        w = float(parse_fraction(w))
    if not isinstance(w, (int, float)) or isinstance(w, bool) or not np.isfinite(w):
        raise InputError("'weight' must be a finite number", path=".weight")
    has_frame, has_matrix = "frame" in item, "matrix" in item
    if has_frame == has_matrix:
        raise InputError("exactly one of 'frame' or 'matrix' is required")
    key = "frame" if has_frame else "matrix"
    try:
        arr = np.asarray(item[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"'{key}' must be a numeric array", path=f".{key}") from exc
    try:
        if has_frame:
            # list of k column vectors of length d
            if arr.ndim != 2 or arr.shape != (k, d):
                raise InputError(f"'frame' must hold {k} vectors of length {d}", path=".frame")
            P = projector_from_frame(d, arr.T)
        else:
            if arr.shape != (d, d):
                raise InputError(f"'matrix' must be {d}x{d}", path=".matrix")
            P = Projector.from_matrix(arr, k)
    except (ValueError, DegenerateFrameError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc), path=f".{key}") from exc
    return P, float(w)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=1, default=str)
    if getattr(args, "output", None) and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _fmt_fraction(x: Fraction) -> str:
    approx = f"{float(x):.6f}"
    exact = Fraction(approx) == x
    return f"{x} ≈ {approx}" + ("" if exact else "…")


# ---------------------------------------------------------------- subcommands

def cmd_dim(args) -> int:
    d, t = args.d, args.t
    K = parse_ranks(args.ranks)
    total = dim_pol_union(d, K, t)
    if args.table:
        rows = []
        for pi in enumerate_partitions(t, d // 2):
            mult = multiplicity(d, K, pi, t)
            if mult:
                rows.append({"pi": str(pi), "dim": dim_irrep(d, pi.scaled(2)), "multiplicity": mult})
        _emit(args, {"d": d, "ranks": K, "t": t, "rows": rows, "total": total})
    else:
        _emit(args, str(total))
    return EXIT_OK


def cmd_bound(args) -> int:
    masses = parse_rank_map(args.masses)
    K = parse_ranks(args.ranks) if args.ranks else None
    value = lower_bound(SignedMeasure(args.d, masses), K, args.t)
    _emit(args, _fmt_fraction(Fraction(value)))
    return EXIT_OK


def cmd_verify(args) -> int:
    config = config_from_json(_read(args.config))
    report = certify(config, args.t, args.tol)
    _emit(args, report.to_dict())
    return EXIT_OK if report.is_cubature else EXIT_FAIL


def cmd_optimize(args) -> int:
    counts = parse_rank_map(args.counts, _parse_int)
    masses = {k: float(v) for k, v in parse_rank_map(args.masses).items()}
    if set(counts) != set(masses):
        raise InputError("--counts and --masses must name the same ranks")
    settings = OptimizerSettings(max_iter=args.max_iter, grad_tol=args.grad_tol, seed=args.seed,
                                 restarts=args.restarts, method=args.method, hops=args.hops)
    best, _ = minimize_with_restarts(args.d, counts, masses, args.t, settings)
    config = best.config
    config.meta.update({"seed": best.seed, "iterations": best.iterations, "t": args.t})
    report = certify(config, args.t, args.tol)
    _emit(args, config_to_json(config, report))
    return EXIT_OK if report.is_cubature else EXIT_FAIL


def cmd_family(args) -> int:
    name = args.name
    if name == "lines-hyperplane":
        if args.d is None:
            raise InputError("lines-hyperplane needs --d")
        config, _ = FAMILIES[name](args.d, parse_fraction(args.m or "1"))
    elif name == "r4-1design":
        config, _ = FAMILIES[name](parse_fraction(args.m1 or "1"))
    elif name in ("r3-2design", "r4-2design"):
        config, _ = FAMILIES[name](parse_fraction(args.m2 or "1"))
    else:
        config, _ = FAMILIES[name]()
    config.meta.setdefault("family", name)
    t = args.t if args.t is not None else FAMILY_STRENGTH[name]
    report = certify(config, t, args.tol)
    _emit(args, config_to_json(config, report))
    return EXIT_OK if report.is_cubature else EXIT_FAIL


def cmd_table1(args) -> int:
    rows, ok = [], True
    for row in table1_fixtures():
        config = row.build()
        report = certify(config, row.t, args.tol)
        counts = config.rank_counts()
        n1, n2 = counts.get(1, 0), sum(v for k, v in counts.items() if k != 1)
        good = report.verdict == "design" and (n1, n2) == (row.n1, row.n2)
        ok &= good
        rows.append({"t": row.t, "d": row.d, "n1": n1, "n2": n2, "m1": str(row.m1), "m2": str(row.m2),
                     "source": row.source, "status": "PASS" if good else "FAIL", "report": report.to_dict()})
    _emit(args, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kernel_eval(args) -> int:
    rng = np.random.default_rng(args.seed)
    d = args.d
    if args.kind in ("k_hom", "vanishing"):
        X, Y = random_symmetric(d, rng), random_symmetric(d, rng)
        value = k_hom(Partition.parse(args.label), X, Y) if args.kind == "k_hom" else vanishing_kernel(X, Y)
    else:
        k = args.k
        l = args.l if args.l is not None else k
        P, Q = random_projector(d, k, rng), random_projector(d, l, rng)
        if args.kind == "p":
            value = p_pi(Partition.parse(args.label), P, Q)
        elif args.kind == "intertwining":
            value = intertwining(Partition.parse(args.label), k, l, P, Q)
        else:
            value = reproducing_kernel_poly(args.t, args.C, P, Q)
    _emit(args, {"kind": args.kind, "d": d, "seed": args.seed, "value": value})
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grassdesigns", description=__doc__.splitlines()[0])
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[out], help="dimension of Pol_t on a union of Grassmannians")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ranks", required=True, help="comma-separated ranks, e.g. 1,2")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--table", action="store_true", help="print the irreducible decomposition as JSON")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("bound", parents=[out], help="potential lower bound for a measure")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--masses", required=True, help="rank:mass pairs, e.g. 1:1,2:5/3")
    p.add_argument("--ranks", default=None, help="rank set K (defaults to the support)")
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", parents=[out], help="certify a configuration file")
    p.add_argument("config", nargs="?", default="-", help="configuration JSON ('-' for stdin)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", parents=[out], help="search for a design by potential minimization")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--counts", required=True, help="rank:count pairs, e.g. 1:6,2:4")
    p.add_argument("--masses", required=True, help="rank:mass pairs, e.g. 1:1,2:3/2")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--grad-tol", type=float, default=1e-9)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--hops", type=int, default=20)
    p.add_argument("--method", choices=("gd", "cg"), default="gd")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("family", parents=[out], help="build and certify an explicit family")
    p.add_argument("--name", required=True, choices=sorted(FAMILIES))
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--m", default=None)
    p.add_argument("--m1", default=None)
    p.add_argument("--m2", default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("table1", parents=[out], help="rebuild and certify the optimal-cardinality table")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("kernel-eval", parents=[out], help="evaluate a kernel at random arguments")
    p.add_argument("--kind", choices=("k_hom", "p", "intertwining", "vanishing", "reproducing"), required=True)
    p.add_argument("--label", default="(0)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--C", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kernel_eval)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps(exc.diagnostic()), file=sys.stderr)
    except (ValueError, PreconditionError, NumericalFailure) as exc:
        print(json.dumps(InputError(str(exc)).diagnostic()), file=sys.stderr)
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
