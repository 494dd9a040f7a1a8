"""Exact k = d - 1 chain construction and its alpha-independent zero mode.

With ``x_i = f_i + f_{i+1}`` and beta restricted to the line through Psi1 and
T_k, ``X(alpha) = (id_k (x) Phi_{alpha,beta(alpha)})(x x^dag)`` is affine in
alpha: ``X = A + alpha B``.  ``A`` and ``B`` are derived mechanically from the
map family and compared against the golden matrices shipped in ``data/``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .linalg import QMatrix, format_fraction
from .maps import phi
from .witnesses import chain_x, witness_matrix


def line_slope(k: int, alt_slope: bool = False) -> Fraction:
    """Slope magnitude of the Psi1 - T_k line for d = k + 1.

    ``alt_slope=True`` returns the ``(k^2 + k + 1)/k^2`` variant, which does not
    pass through T_k; it is kept only as a regression control.
    """
    return Fraction(k * k + k + 1 if alt_slope else k * k + k - 1, k * k)


def line_beta(k: int, alpha, alt_slope: bool = False) -> Fraction:
    return Fraction(k + 1, k) - line_slope(k, alt_slope) * alpha


def chain_matrix(k: int, alpha, alt_slope: bool = False) -> QMatrix:
    d = k + 1
    alpha = Fraction(alpha)
    m = phi(d, alpha, line_beta(k, alpha, alt_slope))
    return QMatrix(witness_matrix(m, chain_x(d), exact=True))


def build_AB(k: int, alt_slope: bool = False) -> tuple[QMatrix, QMatrix]:
    if k < 2:
        raise ValueError("k must be at least 2")
    X0 = chain_matrix(k, 0, alt_slope)
    X1 = chain_matrix(k, 1, alt_slope)
    return X0, X1 - X0


def alternating_m(k: int) -> list[int]:
    d = k + 1
    return [(-1) ** (j + 1) * (d - j) for j in range(1, k + 1)]


def build_psi(k: int) -> list[int]:
    """Integer zero mode, blocks ``psi_1 .. psi_k`` concatenated.

    Block ``j`` (for ``j <= ceil(k/2)``) is ``m_j`` alternating in sign over
    ``j`` entries followed by ``j`` alternating over ``d - j`` entries; the
    remaining blocks follow from the mirror symmetry.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    d = k + 1
    m = alternating_m(k)
    blocks: dict[int, list[int]] = {}
    for j in range(1, (k + 1) // 2 + 1):
        blocks[j] = [m[j - 1] * (-1) ** t for t in range(j)] + [j * (-1) ** t for t in range(d - j)]
    for j in range(1, k + 1):
        if j not in blocks:
            blocks[j] = blocks[k + 1 - j][::-1]
    return [v for j in range(1, k + 1) for v in blocks[j]]


def psi_blocks(psi, k: int) -> list[list[int]]:
    d = k + 1
    return [list(psi[i * d:(i + 1) * d]) for i in range(k)]


def is_mirror_symmetric(psi, k: int) -> bool:
    """``(psi_i)_l == (psi_{k+1-i})_{d+1-l}`` (one-based)."""
    b = psi_blocks(psi, k)
    d = k + 1
    return all(b[i][l] == b[k - 1 - i][d - 1 - l] for i in range(k) for l in range(d))


def shifted_mirror_holds(psi, k: int) -> bool:
    """The ``(psi_i)_l == (psi_{k-i})_{d-l}`` form, read one-based.

    Indices falling outside ``1..k`` or ``1..d`` count as a failure.
    """
    b = psi_blocks(psi, k)
    d = k + 1
    for i in range(1, k + 1):
        for l in range(1, d + 1):
            i2, l2 = k - i, d - l
            if not (1 <= i2 <= k and 1 <= l2 <= d) or b[i - 1][l - 1] != b[i2 - 1][l2 - 1]:
                return False
    return True


@dataclass(frozen=True)
class ZeroModeBundle:
    k: int
    A: QMatrix
    B: QMatrix
    psi: tuple[int, ...]
    m: tuple[int, ...]

    @property
    def d(self) -> int:
        return self.k + 1


def zero_mode_bundle(k: int) -> ZeroModeBundle:
    A, B = build_AB(k)
    return ZeroModeBundle(k, A, B, tuple(build_psi(k)), tuple(alternating_m(k)))


@dataclass(frozen=True)
class ZeroModeReport:
    k: int
    success: bool
    failing_matrix: str | None
    failing_row: int | None
    nullity: int | None
    psi_in_nullspace: bool
    mirror_symmetric: bool
    gcd: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _first_nonzero(vec) -> int | None:
    return next((i for i, v in enumerate(vec) if v != 0), None)


def verify_zero_mode(k: int, A: QMatrix | None = None, B: QMatrix | None = None,
                     psi=None, nullity: bool = True) -> ZeroModeReport:
    """Check ``A psi = B psi = 0`` exactly; optionally the joint nullity."""
    if A is None or B is None:
        A0, B0 = build_AB(k)
        A = A0 if A is None else A
        B = B0 if B is None else B
    psi = build_psi(k) if psi is None else list(psi)
    failing = None
    row = None
    for name, M in (("A", A), ("B", B)):
        r = _first_nonzero(M @ psi)
        if r is not None:
            failing, row = name, r
            break
    n = None
    if nullity:
        n = len(QMatrix.vstack([A, B]).nullspace())
    return ZeroModeReport(
        k=k,
        success=failing is None,
        failing_matrix=failing,
        failing_row=row,
        nullity=n,
        psi_in_nullspace=failing is None and any(psi),
        mirror_symmetric=is_mirror_symmetric(psi, k),
        gcd=math.gcd(*psi),
    )


# -- golden data ----------------------------------------------------------


def parse_rational_matrix(text: str) -> QMatrix:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    return QMatrix([[Fraction(e) for e in r] for r in rows])


def format_rational_matrix(M: QMatrix) -> str:
    return "".join(" ".join(format_fraction(v) for v in row) + "\n" for row in M.rows())


def _data(name: str) -> str:
    return resources.files("posmap").joinpath("data", name).read_text()


def golden_available(k: int) -> bool:
    return resources.files("posmap").joinpath("data", f"chain_k{k}_A.txt").is_file()


def load_golden(k: int) -> tuple[QMatrix, QMatrix, list[int]]:
    A = parse_rational_matrix(_data(f"chain_k{k}_A.txt"))
    B = parse_rational_matrix(_data(f"chain_k{k}_B.txt"))
    psi = [int(v) for v in _data(f"chain_k{k}_psi.txt").split()]
    return A, B, psi


def golden_mismatches(k: int, alt_slope: bool = False) -> dict:
    """Entry-by-entry comparison of the constructed and golden A, B, psi."""
    gA, gB, gpsi = load_golden(k)
    A, B = build_AB(k, alt_slope)
    out = {}
    for name, G, M in (("A", gA, A), ("B", gB, B)):
        bad = [(i, j) for i in range(G.shape[0]) for j in range(G.shape[1]) if G[i, j] != M[i, j]] \
            if G.shape == M.shape else [("shape", G.shape, M.shape)]
        out[name] = bad
    out["psi"] = [] if build_psi(k) == gpsi else ["psi"]
    return out
