"""Choi matrices, their closed-form spectra, exact CP predicates and the
decomposable splittings ``C = P + (id (x) T) Q`` on the positive region.

Convention: ``C = sum_ij e_ij (x) m(e_ij)``; the first tensor factor is the
input copy and partial transposes act on the second factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import regions
from .linalg import (BipartiteIndex, fraction_zeros, hermitian_spectrum, partial_transpose_second,
                     to_fraction)
from .maps import MapCombination, apply_map, family_map, is_exact, phi

PSD_TOL = 1e-9


@dataclass(frozen=True)
class ChoiMatrix:
    d: int
    matrix: np.ndarray
    source: MapCombination

    @property
    def index(self) -> BipartiteIndex:
        return BipartiteIndex(self.d, self.d)

    def spectrum(self) -> np.ndarray:
        return hermitian_spectrum(self.matrix)

    def min_eigenvalue(self) -> float:
        return float(self.spectrum()[0])

    def expectation(self, w) -> float:
        w = np.asarray(w, dtype=complex)
        return float(np.real(np.vdot(w, self.matrix @ w)))


def choi_array(m: MapCombination, exact: bool | None = None) -> np.ndarray:
    """``sum_ij e_ij (x) m(e_ij)`` as an array; exact (object) for rational maps."""
    if exact is None:
        exact = m.exact
    d = m.d
    C = fraction_zeros((d * d, d * d)) if exact else np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            E = fraction_zeros((d, d)) if exact else np.zeros((d, d))
            E[i, j] = Fraction(1) if exact else 1.0
            C[i * d:(i + 1) * d, j * d:(j + 1) * d] = apply_map(m, E)
    return C


def build_choi(m: MapCombination) -> ChoiMatrix:
    C = np.asarray(choi_array(m, exact=False), dtype=complex)
    C.flags.writeable = False
    return ChoiMatrix(m.d, C, m)


def lambda_choi(m: MapCombination) -> ChoiMatrix:
    """Choi matrix of a transposition-family map (no identity component)."""
    if m.c_id != 0:
        raise ValueError("not a lambda-family map: identity coefficient is nonzero")
    return build_choi(m)


def maximally_entangled_unnormalized(d: int) -> np.ndarray:
    """``sum_ij e_ij (x) e_ij``."""
    v = np.eye(d).ravel()
    return np.outer(v, v)


def diagonal_projector(d: int) -> np.ndarray:
    """``sum_i e_ii (x) e_ii``."""
    return np.diag(np.eye(d).ravel())


def swap(d: int) -> np.ndarray:
    """``sum_ij e_ij (x) e_ji``."""
    S = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            S[i * d + j, j * d + i] = 1.0
    return S


def phi_choi_closed_form(d: int, alpha, beta) -> np.ndarray:
    gamma = 1 - alpha - beta
    return (gamma * maximally_entangled_unnormalized(d) + (alpha / d) * np.eye(d * d)
            + beta * diagonal_projector(d))


def phi_choi_spectrum(d: int, alpha, beta) -> list[tuple]:
    """Eigenvalues of the Phi Choi matrix as ``(value, multiplicity)`` pairs."""
    if d < 2:
        raise ValueError("d must be at least 2")
    if is_exact(alpha, beta):
        alpha, beta = to_fraction(alpha), to_fraction(beta)
    return [
        (alpha / d, d * d - d),
        (alpha / d + beta, d - 1),
        (d - (d * d - 1) * alpha / d - (d - 1) * beta, 1),
    ]


def lambda_choi_spectrum(d: int, mu, nu) -> list[tuple]:
    """Eigenvalues of the Lambda Choi matrix: diagonal, symmetric and
    antisymmetric sectors."""
    if is_exact(mu, nu):
        mu, nu = to_fraction(mu), to_fraction(nu)
    pairs = d * (d - 1) // 2
    return [
        (1 - (d - 1) * mu / d, d),
        (1 - (d - 1) * mu / d - nu, pairs),
        ((d + 1) * mu / d + nu - 1, pairs),
    ]


def expand_multiset(pairs) -> list:
    out = []
    for value, mult in pairs:
        out.extend([value] * mult)
    return sorted(out)


def is_completely_positive_exact(family: str, d: int, params) -> bool:
    x, y = regions.rational_point(params)
    q = Fraction(d, d - 1)
    if family == "phi":
        return 0 <= x <= q and -x / d <= y <= q - Fraction(d + 1, d) * x
    if family == "lambda":
        return 0 <= x <= q and 1 - Fraction(d + 1, d) * x <= y <= 1 - Fraction(d - 1, d) * x
    raise ValueError(f"unknown family {family!r}")


# -- decomposable splittings ----------------------------------------------


@dataclass(frozen=True)
class DecompositionPair:
    """``choi = P + (id (x) T) Q`` with ``P, Q`` positive semidefinite."""
    d: int
    point: tuple[Fraction, Fraction]
    P: np.ndarray
    Q: np.ndarray
    choi: np.ndarray
    method: str

    def reconstruction(self) -> np.ndarray:
        return self.P + partial_transpose_second(self.Q, BipartiteIndex(self.d, self.d))

    def residual(self) -> float:
        return float(np.max(np.abs(self.choi - self.reconstruction())))

    def min_eigenvalues(self) -> tuple[float, float]:
        return float(hermitian_spectrum(self.P)[0]), float(hermitian_spectrum(self.Q)[0])


def _pair_sum(d: int, sign: int) -> np.ndarray:
    """``sum_{i<j} f f^dag`` with ``f = e_i (x) e_j + sign * e_j (x) e_i``."""
    out = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(i + 1, d):
            f = np.zeros(d * d)
            f[i * d + j] = 1.0
            f[j * d + i] = sign
            out += np.outer(f, f)
    return out


def lower_edge_pieces(d: int, alpha) -> tuple[np.ndarray, np.ndarray]:
    """Splitting on ``beta = -2 alpha / d``."""
    a = float(alpha)
    P = (1 - (d - 1) * a / d) * maximally_entangled_unnormalized(d)
    Q = (a / d) * _pair_sum(d, +1)
    return P, Q


def upper_edge_pieces(d: int, alpha) -> tuple[np.ndarray, np.ndarray]:
    """Splitting on ``beta = d/(d-1) - alpha``."""
    a = float(alpha)
    beta = d / (d - 1) - a
    P = beta * (diagonal_projector(d) - maximally_entangled_unnormalized(d) / d)
    Q = (a / d) * _pair_sum(d, -1)
    return P, Q


def _pieces(d: int, alpha: Fraction, beta: Fraction):
    C = phi_choi_closed_form(d, float(alpha), float(beta))
    if is_completely_positive_exact("phi", d, (alpha, beta)):
        return C, np.zeros_like(C), "cp"
    if 2 * alpha + d * beta == 0:
        return (*lower_edge_pieces(d, alpha), "lower-edge")
    if alpha + beta == Fraction(d, d - 1):
        return (*upper_edge_pieces(d, alpha), "upper-edge")
    return None


def boundary_decomposition(d: int, alpha, beta) -> DecompositionPair:
    """Decomposable splitting of the Phi Choi matrix anywhere on the positive region.

    CP points split trivially, points on the two non-CP edges use the explicit
    edge constructions, and everything else is interpolated from the region's
    vertices (Psi0, P, T1, Psi1; split along the Psi0 - T1 diagonal).
    """
    a, b = regions.rational_point((alpha, beta))
    pos = regions.region("phi", "Positive", d)
    if not regions.contains(pos, (a, b)):
        raise ValueError(f"({alpha}, {beta}) lies outside the positive region for d={d}")
    C = choi_array(phi(d, float(a), float(b)), exact=False)
    direct = _pieces(d, a, b)
    if direct is not None:
        P, Q, method = direct
        return DecompositionPair(d, (a, b), P, Q, C, method)
    weights = regions.convex_combination((a, b), pos.vertices)
    P = np.zeros_like(C)
    Q = np.zeros_like(C)
    for w, v in zip(weights, pos.vertices):
        if w == 0:
            continue
        Pv, Qv, _ = _pieces(d, *v)
        P += float(w) * Pv
        Q += float(w) * Qv
    return DecompositionPair(d, (a, b), P, Q, C, "vertex-interpolation")


def family_choi(family: str, d: int, x, y) -> ChoiMatrix:
    return build_choi(family_map(family, d, x, y))

