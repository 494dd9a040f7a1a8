"""Named consistency checks over the whole package, as run by ``verify-paper``.

Each check records a measured value next to its pass/fail flag.  Checks that
need a larger dimension than ``d_max`` (or a larger ``k`` than ``k_max``) are
skipped rather than failed.  The ``finding_*`` checks pass when the known-wrong
variant of a formula is shown to fail while the corrected one holds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import chain, certify, regions, witnesses
from .choi import (boundary_decomposition, build_choi, expand_multiset, is_completely_positive_exact,
                   lambda_choi_spectrum, phi_choi_spectrum)
from .linalg import hermitian_spectrum
from .maps import (ChoParams, apply_map, cho_from_phi, cho_map, lam, named_point, phi, phi_from_cho,
                   tomiyama_alpha)


@dataclass
class Check:
    name: str
    passed: bool
    measured: object = None
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": _jsonable(self.measured),
                "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class Report:
    d_max: int
    k_max: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"schema_version": 1, "d_max": self.d_max, "k_max": self.k_max, "passed": self.passed,
                "failures": self.failures, "checks": [c.to_json() for c in self.checks]}


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _max_dev(analytic_pairs, numeric) -> float:
    a = np.array([float(v) for v in expand_multiset(analytic_pairs)])
    return float(np.max(np.abs(np.sort(a) - np.sort(np.asarray(numeric, dtype=float)))))


def grid(lo, hi, n) -> list[Fraction]:
    lo, hi = regions.rationalize(lo), regions.rationalize(hi)
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def sample_in(r: regions.ParamRegion, rng, n: int, margin=0, extra=lambda p: True) -> list:
    xs = [float(v[0]) for v in r.vertices]
    ys = [float(v[1]) for v in r.vertices]
    out = []
    while len(out) < n:
        p = (rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys)))
        mode = "margin" if margin else "closed"
        if regions.contains(r, p, mode, margin or None) and extra(p):
            out.append(regions.rational_point(p))
    return out


def sample_out(r: regions.ParamRegion, rng, n: int, margin, box=(-1.0, 2.5, -1.5, 2.5)) -> list:
    out = []
    while len(out) < n:
        p = (rng.uniform(box[0], box[1]), rng.uniform(box[2], box[3]))
        if regions.outside_by(r, p, margin):
            out.append(regions.rational_point(p))
    return out


# -- individual checks ----------------------------------------------------


def check_choi_spectrum(ds, n=21) -> Check:
    worst = 0.0
    for d in ds:
        for a in grid(-1, 2, n):
            for b in grid(-1, 2, n):
                spec = build_choi(phi(d, float(a), float(b))).spectrum()
                worst = max(worst, _max_dev(phi_choi_spectrum(d, float(a), float(b)), spec))
    return Check("choi_spectrum", worst <= 1e-9, worst, "max |analytic - numeric| eigenvalue")


def check_cp_region(ds, n=21) -> Check:
    bad = []
    vertex_dev = 0.0
    for d in ds:
        cp = regions.region("phi", "CP", d)
        for a in grid(-1, 2, n):
            for b in grid(-1, 2, n):
                inside = regions.contains(cp, (a, b), "margin", Fraction(1, 50))
                outside = regions.outside_by(cp, (a, b), Fraction(1, 50))
                if not (inside or outside):
                    continue
                lo = build_choi(phi(d, float(a), float(b))).min_eigenvalue()
                if inside != (lo >= 0) or is_completely_positive_exact("phi", d, (a, b)) != inside:
                    bad.append((d, a, b))
        for name in ("Psi0", "Psi1", "Psi2"):
            x, y = named_point("phi", name, d)
            vertex_dev = max(vertex_dev, abs(build_choi(phi(d, x, y)).min_eigenvalue()))
    ok = not bad and vertex_dev <= 1e-9
    return Check("cp_region", ok, {"disagreements": len(bad), "vertex_min_eig": vertex_dev})


def check_positivity_seesaw(ds, rng, n_grid=15, n_out=50, restarts=32, seed=0) -> Check:
    worst_out = -math.inf
    min_in = math.inf
    for d in ds:
        pos = regions.region("phi", "Positive", d)
        xs = [float(v[0]) for v in pos.vertices]
        ys = [float(v[1]) for v in pos.vertices]
        for a in grid(min(xs), max(xs), n_grid):
            for b in grid(min(ys), max(ys), n_grid):
                if regions.contains(pos, (a, b), "margin", Fraction(1, 50)):
                    v = certify.seesaw_min_blockform(build_choi(phi(d, float(a), float(b))), 1, restarts, seed)
                    min_in = min(min_in, v.min_value)
        for p in sample_out(pos, rng, n_out, Fraction(1, 50)):
            v = certify.seesaw_min_blockform(build_choi(phi(d, float(p[0]), float(p[1]))), 1, restarts, seed)
            worst_out = max(worst_out, v.min_value)
    ok = min_in >= -1e-9 and worst_out < -1e-6
    return Check("positivity_seesaw", ok, {"min_inside": min_in, "max_outside": worst_out})


def check_positivity_witnesses(ds, rng, n=25) -> Check:
    worst = 0.0
    for d in ds:
        for _ in range(n):
            a, b = rng.uniform(-1, 2, 2)
            m = phi(d, a, b)
            spec = hermitian_spectrum(witnesses.witness_matrix(m, witnesses.allones(d)))
            worst = max(worst, _max_dev(witnesses.allones_spectrum(d, a, b), spec))
            spec = hermitian_spectrum(witnesses.witness_matrix(m, witnesses.rankone_diff(d)))
            worst = max(worst, _max_dev(witnesses.rankone_diff_spectrum(d, a, b), spec))
    return Check("positivity_witness_spectra", worst <= 1e-10, worst)


def check_decompositions(ds, rng, n=100) -> Check:
    worst_res, worst_eig = 0.0, 0.0
    for d in ds:
        for p in sample_in(regions.region("phi", "Positive", d), rng, n):
            dec = boundary_decomposition(d, *p)
            worst_res = max(worst_res, dec.residual())
            worst_eig = min(worst_eig, *dec.min_eigenvalues())
    return Check("decomposability", worst_res <= 1e-10 and worst_eig >= -1e-9,
                 {"max_residual": worst_res, "min_eig": worst_eig})


def check_tomiyama(ds, k_max, restarts=32, seed=0) -> Check:
    bad = []
    for d in ds:
        for k in range(1, min(d, k_max) + 1):
            a = float(tomiyama_alpha(d, k))
            C_plus = build_choi(phi(d, a + 0.03, 0.0))
            C_minus = build_choi(phi(d, a - 0.03, 0.0))
            if not certify.seesaw_min_blockform(C_plus, k, restarts, seed).refuted:
                bad.append(("phi", d, k, "+"))
            if certify.seesaw_min_blockform(C_minus, k, restarts, seed).refuted:
                bad.append(("phi", d, k, "-"))
        if k_max >= 2:
            mu = d / (d + 1)
            if not certify.seesaw_min_blockform(build_choi(lam(d, mu - 0.03, 0.0)), 2, restarts, seed).refuted:
                bad.append(("lambda", d, 2, "-"))
            if certify.seesaw_min_blockform(build_choi(lam(d, mu + 0.03, 0.0)), 2, restarts, seed).refuted:
                bad.append(("lambda", d, 2, "+"))
    return Check("tomiyama_bounds", not bad, bad)


def check_diag_witness(ds, k_max, rng, n=25) -> Check:
    nonzero, worst = [], 0.0
    for d in ds:
        for k in range(1, min(d, k_max) + 1):
            p2, tk = named_point("phi", "Psi2", d), named_point("phi", "Tk", d, k)
            for t in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
                a = p2[0] + t * (tk[0] - p2[0])
                b = p2[1] + t * (tk[1] - p2[1])
                if witnesses.diag_third_unnormalized(d, k, a, b) != 0:
                    nonzero.append((d, k, t))
            for _ in range(n):
                a, b = rng.uniform(-1, 2, 2)
                res = certify.kpos_witness_diag(d, k, a, b)
                worst = max(worst, _max_dev(res.spectrum, res.numeric))
    return Check("diag_witness", not nonzero and worst <= 1e-10, {"off_line": nonzero, "max_dev": worst})


def check_grouped(d_max, rng, pairs=((4, 2), (6, 2), (6, 3), (8, 4)), n=25) -> Check:
    bad, worst, used = [], 0.0, []
    for d, k in pairs:
        if d > d_max:
            continue
        used.append((d, k))
        for a in (Fraction(0), Fraction(1, 2), tomiyama_alpha(d, k)):
            b = (k * d - (k * d - 1) * a) / (k * (d - 1))
            if certify.kpos_witness_grouped(d, k, a, b).row_sum != 0:
                bad.append((d, k, a))
        for _ in range(n):
            a, b = rng.uniform(-1, 2, 2)
            res = certify.kpos_witness_grouped(d, k, a, b)
            ev = hermitian_spectrum(np.asarray(res.W, dtype=float))
            worst = max(worst, float(np.min(np.abs(ev - float(res.row_sum)))))
    return Check("grouped_row_sum", not bad and worst <= 1e-9, {"pairs": used, "nonzero": bad,
                                                                 "eig_dev": worst})


def check_golden(k: int, alt_slope: bool) -> Check:
    mism = chain.golden_mismatches(k, alt_slope)
    count = sum(len(v) for v in mism.values())
    label = "golden_chain_k%d" % k
    return Check(label, count == 0, {n: len(v) for n, v in mism.items()},
                 "(k^2+k+1)/k^2 line slope" if alt_slope else "")


def check_zero_modes(ks) -> Check:
    bad, nullities = [], {}
    for k in ks:
        rep = chain.verify_zero_mode(k)
        nullities[k] = rep.nullity
        if not (rep.success and rep.mirror_symmetric and rep.gcd == 1):
            bad.append(k)
    return Check("zero_modes", not bad, {"failed": bad, "nullity": nullities})


def check_chain_min_eig(ks) -> Check:
    worst = 0.0
    for k in ks:
        A, B = chain.build_AB(k)
        ak = tomiyama_alpha(k + 1, k)
        for a in (Fraction(0), ak / 2, ak):
            worst = max(worst, abs(float(hermitian_spectrum((A + B * a).to_float())[0])))
    return Check("chain_min_eig", worst <= 1e-9, worst)


def check_convex_identities(ds) -> Check:
    bad = []
    half = Fraction(1, 2)
    for d in ds:
        P = lambda n, k=None, fam="phi": named_point(fam, n, d, k)  # noqa: E731
        comb = lambda ws, ps: tuple(sum(w * p[i] for w, p in zip(ws, ps)) for i in range(2))  # noqa: E731
        if P("Psi2") != comb((half, half), (P("T1"), P("P"))):
            bad.append(("Psi2", d))
        if P("Tk", d) != comb((Fraction(1, d + 1), Fraction(d, d + 1)), (P("Psi1"), P("Psi2"))):
            bad.append(("Td", d))
        if P("Psi2~", fam="lambda") != comb((Fraction(1, d), Fraction(d - 1, d)),
                                            (P("T1~", fam="lambda"), P("P~", fam="lambda"))):
            bad.append(("Psi2~", d))
        if P("T2~", fam="lambda") != comb((Fraction(d - 1, d + 1), Fraction(2, d + 1)),
                                          (P("Psi1~", fam="lambda"), P("Psi2~", fam="lambda"))):
            bad.append(("T2~", d))
    return Check("convex_identities", not bad, bad)


def check_cho(rng, n=100) -> Check:
    worst_rt, worst_map = 0.0, 0.0
    for _ in range(n):
        a, b = rng.uniform(0.05, 3, 2)
        al, be = phi_from_cho(a, b)
        a2, b2 = cho_from_phi(al, be)
        worst_rt = max(worst_rt, abs(a2 - a), abs(b2 - b))
        X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        lhs = cho_map(ChoParams(a, b, b), X)
        rhs = (a + 2 * b) * apply_map(phi(3, al, be), X)
        worst_map = max(worst_map, float(np.max(np.abs(lhs - rhs))))
    line1, line2 = regions.cho_lines_d3()
    pts = {n: named_point("phi", n, 3, 2) for n in ("Psi1", "Psi2", "Tk")}
    lines_ok = (line1.contains(pts["Psi1"]) and line1.contains(pts["Psi2"])
                and line2.contains(pts["Psi1"]) and line2.contains(pts["Tk"]))
    ok = worst_rt <= 1e-12 and worst_map <= 1e-12 and lines_ok
    return Check("cho_lines", ok, {"roundtrip": worst_rt, "map_identity": worst_map, "lines": lines_ok})


def check_lambda(ds, rng, n=11) -> Check:
    worst, region_bad = 0.0, []
    for d in ds:
        for mu in grid(-0.5, 2, n):
            for nu in grid(-1.5, 1.5, n):
                t = certify.lambda_2pos_witness(d, mu, nu)
                X = witnesses.witness_matrix(lam(d, float(mu), float(nu)), witnesses.lambda2_w(d))
                ev = hermitian_spectrum(X)
                worst = max(worst, max(float(np.min(np.abs(ev - float(v)))) for v in t))
                spec = build_choi(lam(d, float(mu), float(nu))).spectrum()
                worst = max(worst, _max_dev(lambda_choi_spectrum(d, float(mu), float(nu)), spec))
        cp = regions.region("lambda", "CP", d)
        for k in range(2, d + 1):
            if set(regions.kpos_region("lambda", d, k).vertices) != set(cp.vertices):
                region_bad.append((d, k))
    return Check("lambda_family", worst <= 1e-9 and not region_bad, {"max_dev": worst, "region": region_bad})


def check_conjecture(rng, n=30, restarts=64, d=5, k=2) -> Check:
    r = regions.kpos_region("phi", d, k)
    cp = regions.region("phi", "CP", d)
    pts = sample_in(r, rng, n, Fraction(1, 100), lambda p: p[1] > 0 and not regions.contains(cp, p))
    flagged = all(certify.certify("phi", d, k, p, restarts=0).conjectural for p in pts)
    worst = min(certify.seesaw_min_blockform(build_choi(phi(d, float(p[0]), float(p[1]))), k, restarts, 0)
                .min_value for p in pts)
    return Check("conjecture_bookkeeping", flagged and worst >= -1e-9 and r.conjectural,
                 {"all_flagged": flagged, "min_seesaw": worst})


# -- documented discrepancies ---------------------------------------------


def finding_line_coefficient(ks) -> Check:
    """The (k^2+k+1)/k^2 slope misses T_k, the (k^2+k-1)/k^2 slope hits it."""
    rows = {}
    ok = True
    for k in ks:
        d = k + 1
        tk = tomiyama_alpha(d, k)
        corrected = chain.line_beta(k, tk) == 0
        alt = chain.line_beta(k, tk, alt_slope=True) == 0
        rows[k] = {"corrected_hits_Tk": corrected, "alt_slope_hits_Tk": alt}
        ok &= corrected and not alt
    return Check("finding_line_coefficient", ok, rows, "slope (k^2+k-1)/k^2 replaces (k^2+k+1)/k^2")


def finding_mirror_indices(ks) -> Check:
    rows = {k: {"corrected": chain.is_mirror_symmetric(chain.build_psi(k), k),
                "shifted": chain.shifted_mirror_holds(chain.build_psi(k), k)} for k in ks}
    ok = all(r["corrected"] and not r["shifted"] for r in rows.values())
    return Check("finding_mirror_indices", ok, rows, "(k+1-i, d+1-l) replaces (k-i, d-l)")


# -- driver -----------------------------------------------------------------


def run(d_max: int = 6, k_max: int = 6, seed: int = 0, restarts: int = 32,
        alt_slope: bool = False, zero_mode_k_max: int | None = None) -> Report:
    if d_max < 2 or k_max < 1:
        raise ValueError("need d_max >= 2 and k_max >= 1")
    rng = np.random.default_rng(seed)
    ds = list(range(2, d_max + 1))
    top = zero_mode_k_max if zero_mode_k_max is not None else min(k_max, d_max - 1)
    zk = list(range(2, top + 1))
    report = Report(d_max, k_max)

    def add(fn, *args, **kw):
        t = time.perf_counter()
        c = fn(*args, **kw)
        c.seconds = time.perf_counter() - t
        report.checks.append(c)

    add(check_choi_spectrum, ds)
    add(check_cp_region, ds)
    add(check_positivity_seesaw, [d for d in ds if d <= 4], rng, restarts=restarts, seed=seed)
    add(check_positivity_witnesses, ds, rng)
    add(check_decompositions, [d for d in ds if d <= 5], rng)
    add(check_tomiyama, [d for d in ds if d <= 5], k_max, restarts=restarts, seed=seed)
    add(check_diag_witness, ds, k_max, rng)
    if d_max >= 4 and k_max >= 2:
        add(check_grouped, d_max, rng)
    for k in (3, 4):
        if k + 1 <= d_max and chain.golden_available(k):
            add(check_golden, k, alt_slope)
    if zk:
        add(check_zero_modes, zk)
        add(check_chain_min_eig, [k for k in zk if k >= 3] or zk)
        add(finding_line_coefficient, zk)
        add(finding_mirror_indices, zk)
    add(check_convex_identities, ds)
    if d_max >= 3:
        add(check_cho, rng)
    add(check_lambda, [d for d in ds if d <= 5], rng)
    if d_max >= 5 and k_max >= 2:
        add(check_conjecture, rng)
    return report
