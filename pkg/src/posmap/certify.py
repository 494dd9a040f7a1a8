"""Numerical certification and refutation of (k-)positivity.

``seesaw_min_blockform`` minimizes ``<w|C|w>`` over unit vectors of Schmidt
rank at most ``k`` by alternating exact eigen-steps; the ``kpos_witness_*``
functions evaluate the explicit witness vectors.  A ``Refuted`` verdict always
carries a vector ``w`` in ``C^d (x) C^d`` with ``<w|C|w> = min_value < -tol``,
so every refutation can be re-checked against the Choi matrix alone.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import chain, regions, witnesses
from .choi import PSD_TOL, ChoiMatrix, build_choi
from .linalg import hermitian_defect, hermitian_spectrum, hermitize, principal_submatrix
from .maps import MapCombination, family_map, is_exact, lam, phi, tomiyama_alpha

DEFAULT_RESTARTS = 32
MAX_ITER = 500
IMPROVE_TOL = 1e-12


class Status(str, enum.Enum):
    CERTIFIED_ANALYTIC = "CertifiedAnalytic"
    NUMERICALLY_SUPPORTED = "NumericallySupported"
    REFUTED = "Refuted"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CertVerdict:
    status: Status
    min_value: float
    witness: np.ndarray | None = None
    schmidt_bound: int | None = None
    restarts_used: int = 0
    seed: int | None = None
    conjectural: bool = False
    method: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    def to_json(self) -> dict:
        out = {
            "status": self.status.value,
            "min_value": None if math.isnan(self.min_value) else self.min_value,
            "schmidt_bound": self.schmidt_bound,
            "restarts_used": self.restarts_used,
            "seed": self.seed,
            "conjectural": self.conjectural,
            "method": self.method,
        }
        if self.witness is not None:
            out["witness"] = [[float(z.real), float(z.imag)] for z in self.witness]
        return out


def schmidt_rank(w, d: int, threshold: float = 1e-8) -> int:
    s = np.linalg.svd(np.asarray(w, dtype=complex).reshape(d, d), compute_uv=False)
    return int(np.sum(s > threshold))


def expectation(C, w) -> float:
    C = C.matrix if isinstance(C, ChoiMatrix) else np.asarray(C)
    w = np.asarray(w, dtype=complex)
    return float(np.real(np.vdot(w, C @ w)))


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary hashable parts (point, k, d, ...)."""
    text = "|".join(str(regions.rationalize(p)) if isinstance(p, (float, int, Fraction)) else str(p)
                    for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


def _verdict_from_vector(C: np.ndarray, w: np.ndarray, d: int, k: int, method: str, tol: float,
                         **kw) -> CertVerdict:
    w = np.asarray(w, dtype=complex)
    w = w / np.linalg.norm(w)
    value = expectation(C, w)
    if value < -tol:
        return CertVerdict(Status.REFUTED, value, w, k, method=method, **kw)
    return CertVerdict(Status.NUMERICALLY_SUPPORTED, value, None, k, method=method, **kw)


# -- see-saw ---------------------------------------------------------------


def _orthonormal_columns(M: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(M)
    return q


def _bottom(H: np.ndarray):
    vals, vecs = np.linalg.eigh(H)
    return vals[:, 0], vecs[:, :, 0]


def seesaw_min_blockform(C, k: int, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                         max_iter: int = MAX_ITER, improve_tol: float = IMPROVE_TOL,
                         tol: float = PSD_TOL) -> CertVerdict:
    """Minimize ``<w|C|w>`` over unit ``w = vec(P Q^T)`` with ``P, Q`` of size ``d x k``.

    All restarts run as one batch; each half-step fixes one factor (with
    orthonormal columns) and takes the bottom eigenvector of the contracted
    ``dk x dk`` matrix for the other.
    """
    mat = C.matrix if isinstance(C, ChoiMatrix) else np.asarray(C, dtype=complex)
    n = mat.shape[0]
    d = math.isqrt(n)
    if d * d != n:
        raise ValueError("Choi matrix size is not a square")
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}")
    if hermitian_defect(mat) > 1e-12:
        raise ValueError("matrix is not Hermitian")
    if restarts < 1:
        raise ValueError("need at least one restart")
    T = hermitize(mat).reshape(d, d, d, d)
    rng = np.random.default_rng(seed)
    P = rng.standard_normal((restarts, d, k)) + 1j * rng.standard_normal((restarts, d, k))
    Q = rng.standard_normal((restarts, d, k)) + 1j * rng.standard_normal((restarts, d, k))
    best = np.full(restarts, np.inf)
    iters = 0
    for iters in range(1, max_iter + 1):
        Q = _orthonormal_columns(Q)
        H = np.einsum("nbr,abce,nes->narcs", Q.conj(), T, Q, optimize=True).reshape(restarts, d * k, d * k)
        _, x = _bottom(H)
        P = _orthonormal_columns(x.reshape(restarts, d, k))
        H = np.einsum("nar,abce,ncs->nbres", P.conj(), T, P, optimize=True).reshape(restarts, d * k, d * k)
        vals, y = _bottom(H)
        Q = y.reshape(restarts, d, k)
        improvement = np.max(best - vals) if np.all(np.isfinite(best)) else np.inf
        best = np.minimum(best, vals)
        if improvement < improve_tol:
            break
    W = np.einsum("nar,nbr->nab", P, Q).reshape(restarts, n)
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    values = np.real(np.einsum("ni,ij,nj->n", W.conj(), mat, W))
    i = int(np.argmin(values))
    return _verdict_from_vector(mat, W[i], d, k, "seesaw", tol, restarts_used=restarts, seed=seed,
                                details={"iterations": iters})


# -- explicit witnesses ---------------------------------------------------


def refute_with_witness(m: MapCombination, w: witnesses.WitnessSpec, tol: float = PSD_TOL) -> CertVerdict:
    """Turn the bottom eigenvector of ``(id_k (x) m)(vv^dag)`` into a Choi-space verdict."""
    X = np.asarray(witnesses.witness_matrix(m, w, exact=False), dtype=complex)
    vals, vecs = np.linalg.eigh(hermitize(X))
    u = witnesses.choi_vector(w, vecs[:, 0])
    C = build_choi(m)
    if np.linalg.norm(u) < 1e-14:
        return CertVerdict(Status.NUMERICALLY_SUPPORTED, float(vals[0]), None, w.k, method=w.kind)
    return _verdict_from_vector(C.matrix, u, m.d, w.k, w.kind, tol, details={"witness_min_eig": float(vals[0])})


def witness_allones_spectrum(d: int, alpha, beta) -> list[tuple]:
    return witnesses.allones_spectrum(d, alpha, beta)


def witness_rankone_diff(d: int, alpha, beta) -> float:
    X = witnesses.witness_matrix(phi(d, float(alpha), float(beta)), witnesses.rankone_diff(d))
    return float(hermitian_spectrum(X)[0])


@dataclass(frozen=True)
class DiagWitnessResult:
    verdict: CertVerdict
    spectrum: list  # (value, multiplicity), analytic
    numeric: np.ndarray
    third_unnormalized: object


def kpos_witness_diag(d: int, k: int, alpha, beta, tol: float = PSD_TOL) -> DiagWitnessResult:
    w = witnesses.diag_v(d, k)
    spec = witnesses.diag_spectrum(d, k, alpha, beta)
    m = phi(d, float(alpha), float(beta))
    numeric = hermitian_spectrum(witnesses.witness_matrix(m, w))
    verdict = refute_with_witness(m, w, tol)
    return DiagWitnessResult(verdict, spec, numeric, witnesses.diag_third_unnormalized(d, k, alpha, beta))


def grouped_submatrix(d: int, k: int, alpha, beta) -> np.ndarray:
    """Principal ``d x d`` block of ``(id_k (x) Phi)(ww^dag)`` keeping group ``i`` in block row ``i``."""
    w = witnesses.grouped_w(d, k)
    m = phi(d, alpha, beta)
    X = witnesses.witness_matrix(m, w)
    ell = d // k
    keep = [i * d + i * ell + t for i in range(k) for t in range(ell)]
    return principal_submatrix(X, keep)


@dataclass(frozen=True)
class GroupedWitnessResult:
    row_sum: object
    verdict: CertVerdict
    W: np.ndarray


def kpos_witness_grouped(d: int, k: int, alpha, beta, tol: float = PSD_TOL) -> GroupedWitnessResult:
    if k < 1 or d % k:
        raise ValueError(f"k={k} does not divide d={d}")
    W = grouped_submatrix(d, k, alpha, beta)
    sums = [sum(row) for row in W]
    if any(s != sums[0] for s in sums) and not np.allclose(np.asarray(sums, dtype=float), float(sums[0]),
                                                           atol=1e-12):
        raise AssertionError("grouped submatrix does not have constant row sums")
    lam_ = sums[0]
    Wf = np.asarray(W, dtype=float)
    ones = np.ones(d)
    if np.max(np.abs(Wf @ ones - float(lam_) * ones)) > 1e-9:
        raise AssertionError("row sum is not an eigenvalue of the grouped submatrix")
    m = phi(d, float(alpha), float(beta))
    ell = d // k
    z = np.zeros(k * d)
    for i in range(k):
        z[i * d + i * ell:i * d + (i + 1) * ell] = 1.0
    u = witnesses.choi_vector(witnesses.grouped_w(d, k), z)
    verdict = _verdict_from_vector(build_choi(m).matrix, u, d, k, "GroupedW", tol)
    return GroupedWitnessResult(lam_, verdict, W)


@dataclass(frozen=True)
class ChainWitnessResult:
    X: np.ndarray
    A: object
    B: object
    min_eig: float


def kpos_witness_chain(d: int, alpha, alt_slope: bool = False) -> ChainWitnessResult:
    """Chain witness on the Psi1 - T_{d-1} line; ``X = A + alpha B`` is checked exactly."""
    if d < 3:
        raise ValueError("the chain construction needs d >= 3")
    k = d - 1
    A, B = chain.build_AB(k, alt_slope)
    if is_exact(alpha):
        X = chain.chain_matrix(k, alpha, alt_slope)
        if X != A + B * alpha:
            raise AssertionError("X != A + alpha B")
        Xf = X.to_float()
    else:
        Xf = A.to_float() + float(alpha) * B.to_float()
    return ChainWitnessResult(Xf, A, B, float(hermitian_spectrum(Xf)[0]))


def lambda_2pos_witness(d: int, mu, nu) -> tuple:
    """Closed-form triple, cross-checked against the support of ``(id_2 (x) Lambda)(ww^dag)``."""
    triple = witnesses.lambda2_triple(d, mu, nu)
    X = witnesses.witness_matrix(lam(d, float(mu), float(nu)), witnesses.lambda2_w(d))
    support = [0, d - 1, d, 2 * d - 1]
    numeric = hermitian_spectrum(principal_submatrix(X, support))
    t1, t2, t3 = (float(t) for t in triple)
    expected = np.sort([t1, t1, t2, t3])
    if np.max(np.abs(numeric - expected)) > 1e-9:
        raise AssertionError(f"witness spectrum {numeric} differs from {expected}")
    return triple


# -- dispatcher -------------------------------------------------------------


def applicable_witnesses(family: str, d: int, k: int) -> list[witnesses.WitnessSpec]:
    out = []
    if k == 1:
        out += [witnesses.allones(d), witnesses.rankone_diff(d)]
    if family == "phi":
        out.append(witnesses.diag_v(d, k))
        if k > 1 and d % k == 0:
            out.append(witnesses.grouped_w(d, k))
        if k == d - 1 and d >= 3:
            out.append(witnesses.chain_x(d))
    elif k >= 2:
        out.append(witnesses.lambda2_w(d))
    return out


def is_conjectural_point(family: str, d: int, k: int, point) -> bool:
    """Points whose k-positivity classification rests on the open conjecture."""
    return family == "phi" and regions.is_conjectural_case(d, k) and regions.rational_point(point)[1] > 0


def certify(family: str, d: int, k: int, params, restarts: int = DEFAULT_RESTARTS, seed: int | None = None,
            tol: float = PSD_TOL) -> CertVerdict:
    """Exact region verdict first, then numerics.

    Inside the region: ``CertifiedAnalytic`` where the classification is
    proven (CP points included), otherwise a see-saw run whose verdict is
    flagged ``conjectural``.  Outside: the explicit witnesses, then the
    see-saw, look for a refuting vector.  ``restarts=0`` skips the see-saw.
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}")
    rp = regions.rational_point(params)
    if seed is None:
        seed = derive_seed(family, d, k, rp[0], rp[1])
    m = family_map(family, d, float(params[0]), float(params[1]))
    C = build_choi(m)
    inside = regions.contains(regions.kpos_region(family, d, k), rp)
    conjectural = is_conjectural_point(family, d, k, rp)
    proven = not conjectural or regions.contains(regions.region(family, "CP", d), rp)
    if inside and proven:
        if restarts < 1:
            return CertVerdict(Status.CERTIFIED_ANALYTIC, float("nan"), None, k, 0, seed, conjectural, "region")
        v = seesaw_min_blockform(C, k, restarts, seed, tol=tol)
        return CertVerdict(Status.CERTIFIED_ANALYTIC, v.min_value, None, k, restarts, seed, conjectural,
                           "region", {"seesaw_status": v.status.value})
    if not inside:
        for w in applicable_witnesses(family, d, k):
            v = refute_with_witness(m, w, tol)
            if v.refuted:
                return CertVerdict(v.status, v.min_value, v.witness, k, 0, seed, conjectural, w.kind, v.details)
    if restarts < 1:
        return CertVerdict(Status.NUMERICALLY_SUPPORTED, float("nan"), None, k, 0, seed, conjectural, "none",
                           {"inside_region": inside})
    v = seesaw_min_blockform(C, k, restarts, seed, tol=tol)
    return CertVerdict(v.status, v.min_value, v.witness, k, v.restarts_used, seed, conjectural, "seesaw",
                       {**v.details, "inside_region": inside})


def tomiyama_point(d: int, k: int) -> tuple[Fraction, Fraction]:
    return tomiyama_alpha(d, k), Fraction(0)
