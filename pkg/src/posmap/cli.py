"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad arguments, 3 I/O
failure, 4 domain precondition failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

from . import chain, certify, regions, verify
from .choi import boundary_decomposition, build_choi
from .linalg import format_fraction
from .maps import family_map

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_number(text: str) -> Fraction | float:
    """``3/2`` and integers stay exact; decimals are parsed as exact decimals."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {text!r}") from exc


def parse_point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"point must be 'x,y', got {text!r}")
    return tuple(parse_number(p) for p in parts)


def thread_cap() -> int:
    raw = os.environ.get("POSMAP_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"POSMAP_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise UsageError("POSMAP_THREADS must be at least 1")
    return n


def _fmt(x) -> str:
    return "%.17g" % float(x)


def _emit(args, text: str) -> None:
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _check_family(family: str) -> None:
    if family not in ("phi", "lambda"):
        raise UsageError(f"family must be 'phi' or 'lambda', got {family!r}")


def _check_d(d: int) -> None:
    if d < 2:
        raise UsageError("--d must be at least 2")


# -- classification -------------------------------------------------------


@dataclass(frozen=True)
class ClassificationRecord:
    family: str
    d: int
    point: tuple[Fraction, Fraction]
    cp: bool
    kpos: tuple[bool, ...]  # k = 1..d
    conjectural: bool
    boundary: bool
    numeric: dict | None = None

    @property
    def pos(self) -> bool:
        return self.kpos[0]

    def to_json(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "family": self.family,
            "d": self.d,
            "point": [format_fraction(v) for v in self.point],
            "cp": self.cp,
            "pos": self.pos,
            "kpos": {str(k): v for k, v in enumerate(self.kpos, 1)},
            "conjectural": self.conjectural,
            "boundary": self.boundary,
        }
        if self.numeric is not None:
            out["numeric"] = self.numeric
        return out


def classify_point(family: str, d: int, point) -> ClassificationRecord:
    p = regions.rational_point(point)
    kpos = tuple(regions.contains(regions.kpos_region(family, d, k), p) for k in range(1, d + 1))
    cp_region = regions.region(family, "CP", d)
    cp = regions.contains(cp_region, p)
    pos_region = regions.region(family, "Positive", d)
    # conjectural: some k-verdict relies on the open part of the classification
    conj = regions.contains(pos_region, p) and not cp and any(
        certify.is_conjectural_point(family, d, k, p) for k in range(1, d + 1))
    boundary = any(regions.on_boundary(regions.kpos_region(family, d, k), p) for k in range(1, d + 1)) \
        or regions.on_boundary(cp_region, p)
    return ClassificationRecord(family, d, p, cp, kpos, conj, boundary)


def cmd_classify(args) -> int:
    _check_family(args.family)
    _check_d(args.d)
    point = parse_point(args.point)
    rec = classify_point(args.family, args.d, point)
    if args.numeric:
        ks = [args.k] if args.k else list(range(1, args.d + 1))
        if any(not 1 <= k <= args.d for k in ks):
            raise UsageError("--k must lie in 1..d")
        numeric = {}
        for k in ks:
            seed = certify.derive_seed(args.seed, args.family, args.d, k, *rec.point)
            numeric[str(k)] = certify.certify(args.family, args.d, k, point, args.restarts, seed,
                                              args.tol).to_json()
        rec = replace(rec, numeric=numeric)
    _emit(args, _dump(rec.to_json()))
    return EXIT_OK


def _grid_axis(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


@dataclass(frozen=True)
class SweepSpec:
    family: str
    d: int
    k: int
    grid: tuple
    mode: str
    seed: int
    restarts: int

    def __post_init__(self):
        xmin, xmax, ymin, ymax, nx, ny = self.grid
        if nx < 2 or ny < 2:
            raise UsageError("grid needs nx, ny >= 2")
        if not (xmin < xmax and ymin < ymax):
            raise UsageError("grid needs xmin < xmax and ymin < ymax")
        if self.mode not in ("exact", "numeric", "both"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if not 1 <= self.k <= self.d:
            raise UsageError("--k must lie in 1..d")

    def points(self) -> list[tuple[Fraction, Fraction]]:
        xmin, xmax, ymin, ymax, nx, ny = self.grid
        xs = _grid_axis(xmin, xmax, nx)
        ys = _grid_axis(ymin, ymax, ny)
        return [(x, y) for y in ys for x in xs]


def sweep_rows(spec: SweepSpec, tol: float = 1e-9, threads: int = 1) -> list[list[str]]:
    numeric = spec.mode in ("numeric", "both")

    def cell(p):
        rec = classify_point(spec.family, spec.d, p)
        row = [_fmt(p[0]), _fmt(p[1]), int(rec.cp), int(rec.pos), *map(int, rec.kpos), int(rec.conjectural)]
        if numeric:
            seed = certify.derive_seed(spec.seed, spec.family, spec.d, spec.k, p[0], p[1])
            C = build_choi(family_map(spec.family, spec.d, float(p[0]), float(p[1])))
            v = certify.seesaw_min_blockform(C, spec.k, spec.restarts, seed, tol=tol)
            row.append(_fmt(v.min_value))
        else:
            row.append("")
        return [str(v) for v in row]

    pts = spec.points()
    if threads > 1 and numeric:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(cell, pts))
    return [cell(p) for p in pts]


def sweep_csv(spec: SweepSpec, tol: float = 1e-9, threads: int = 1) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "cp", "pos", *[f"kpos_{k}" for k in range(1, spec.d + 1)], "conjectural",
                "min_numeric"])
    w.writerows(sweep_rows(spec, tol, threads))
    return buf.getvalue()


def cmd_sweep(args) -> int:
    _check_family(args.family)
    _check_d(args.d)
    parts = args.grid.split(",")
    if len(parts) != 6:
        raise UsageError("--grid must be xmin,xmax,ymin,ymax,nx,ny")
    try:
        nx, ny = int(parts[4]), int(parts[5])
    except ValueError as exc:
        raise UsageError("nx and ny must be integers") from exc
    bounds = tuple(parse_number(p) for p in parts[:4])
    spec = SweepSpec(args.family, args.d, args.k or 1, (*bounds, nx, ny), args.mode, args.seed, args.restarts)
    _emit(args, sweep_csv(spec, args.tol, thread_cap()))
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    if args.d_max < 2 or args.k_max < 1:
        raise UsageError("need --d-max >= 2 and --k-max >= 1")
    report = verify.run(args.d_max, args.k_max, args.seed, args.restarts, alt_slope=args.use_printed_eq_beta)
    if args.json or args.out:
        _emit(args, _dump(report.to_json()))
    else:
        for c in report.checks:
            sys.stdout.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  {json.dumps(c.to_json()['measured'])}\n")
    if not report.passed:
        sys.stderr.write("failed checks: " + ", ".join(report.failures) + "\n")
        return EXIT_VERIFY
    return EXIT_OK


def _matrix_json(M) -> list:
    return [[[float(z.real), float(z.imag)] if isinstance(z, complex) else float(z) for z in row] for row in M]


def cmd_decompose(args) -> int:
    _check_d(args.d)
    a, b = parse_number(args.alpha), parse_number(args.beta)
    pos = regions.region("phi", "Positive", args.d)
    if not regions.contains(pos, (a, b)):
        raise DomainError(f"({args.alpha}, {args.beta}) is outside the positive region for d={args.d}; "
                          f"edge slacks {[format_fraction(s) for s in regions.slacks(pos, (a, b))]}")
    dec = boundary_decomposition(args.d, a, b)
    pmin, qmin = dec.min_eigenvalues()
    out = {
        "schema_version": SCHEMA_VERSION,
        "d": args.d,
        "point": [format_fraction(v) for v in dec.point],
        "method": dec.method,
        "residual": dec.residual(),
        "min_eig_P": pmin,
        "min_eig_Q": qmin,
        "P": _matrix_json(dec.P),
        "Q": _matrix_json(dec.Q),
    }
    _emit(args, _dump(out))
    return EXIT_OK


def cmd_zero_mode(args) -> int:
    if args.k < 2:
        raise UsageError("k must be at least 2")
    rep = chain.verify_zero_mode(args.k)
    out = {"schema_version": SCHEMA_VERSION, **rep.to_json(), "psi": chain.build_psi(args.k)}
    if args.json or args.out:
        _emit(args, _dump(out))
    else:
        _emit(args, f"k={rep.k} success={rep.success} nullity={rep.nullity} psi={out['psi']}\n")
    return EXIT_OK if rep.success else EXIT_VERIFY


def cmd_regions(args) -> int:
    _check_family(args.family)
    _check_d(args.d)
    kinds = [args.kind] if args.kind else (["CP", "Positive", "KPos"] if args.family == "lambda"
                                           else ["CP", "Positive", "KPos", "KPosPlus", "KPosMinus"])
    ks = [args.k] if args.k else list(range(1, args.d + 1))
    out = []
    try:
        for kind in kinds:
            if kind in ("CP", "Positive"):
                out.append(regions.region(args.family, kind, args.d).to_json())
            else:
                out.extend(regions.region(args.family, kind, args.d, k).to_json() for k in ks)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, _dump({"schema_version": SCHEMA_VERSION, "regions": out}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=certify.DEFAULT_RESTARTS)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--out")
    common.add_argument("--json", action="store_true")

    p = _Parser(prog="posmap", description="Positivity classification of Phi and Lambda map families")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="classify one parameter point")
    c.add_argument("family")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--point", required=True, help="x,y (decimals or fractions)")
    c.add_argument("--k", type=int)
    c.add_argument("--numeric", action="store_true", help="corroborate with witnesses and see-saw")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("sweep", parents=[common], help="classify a rectangular grid, CSV output")
    s.add_argument("--family", default="phi")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, help="Schmidt-rank bound for numeric mode (default 1)")
    s.add_argument("--grid", required=True, help="xmin,xmax,ymin,ymax,nx,ny (write --grid=... when xmin is negative)")
    s.add_argument("--mode", default="exact", choices=["exact", "numeric", "both"])
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify-paper", parents=[common], help="run every named consistency check")
    v.add_argument("--d-max", type=int, default=6)
    v.add_argument("--k-max", type=int, default=6)
    v.add_argument("--use-printed-eq-beta", action="store_true",
                   help="build the chain matrices with the (k^2+k+1)/k^2 line slope (expected to fail)")
    v.set_defaults(func=cmd_verify_paper)

    d = sub.add_parser("decompose", parents=[common], help="decomposable splitting on the positive region")
    d.add_argument("--d", type=int, required=True)
    d.add_argument("alpha")
    d.add_argument("beta")
    d.set_defaults(func=cmd_decompose)

    z = sub.add_parser("zero-mode", parents=[common], help="exact zero-mode verification for k = d - 1")
    z.add_argument("k", type=int)
    z.set_defaults(func=cmd_zero_mode)

    r = sub.add_parser("regions", parents=[common], help="export region polygons as JSON")
    r.add_argument("--family", default="phi")
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--k", type=int)
    r.add_argument("--kind", choices=list(regions.KINDS))
    r.set_defaults(func=cmd_regions)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.restarts < 0:
            raise UsageError("--restarts must be non-negative")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"posmap: error: {exc}\n")
        return EXIT_ARGS
    except DomainError as exc:
        sys.stderr.write(f"posmap: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"posmap: {exc}\n")
        return EXIT_IO
