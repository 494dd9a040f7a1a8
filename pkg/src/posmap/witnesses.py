"""Witness vectors for (k-)positivity and their closed-form spectra.

A witness is a vector ``v = sum_i e_i (x) v_i`` in ``C^k (x) C^d``; a map ``m``
passes the test when ``(id_k (x) m)(v v^dag)`` is positive semidefinite.  The
vectors are stored as the ``k x d`` array of blocks ``v_i`` (integer entries,
so exact evaluation is available for rational maps).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import fraction_array, to_fraction
from .maps import MapCombination, extend_and_apply, is_exact

KINDS = ("AllOnes", "RankOneDiff", "DiagV", "GroupedW", "ChainX", "Lambda2W")


@dataclass(frozen=True)
class WitnessSpec:
    kind: str
    k: int
    d: int
    blocks: np.ndarray  # k x d

    @property
    def vector(self) -> np.ndarray:
        return self.blocks.reshape(-1)


def _spec(kind, blocks) -> WitnessSpec:
    blocks = np.asarray(blocks, dtype=int)
    blocks.flags.writeable = False
    return WitnessSpec(kind, blocks.shape[0], blocks.shape[1], blocks)


def allones(d: int) -> WitnessSpec:
    return _spec("AllOnes", np.ones((1, d)))


def rankone_diff(d: int) -> WitnessSpec:
    b = np.zeros((1, d))
    b[0, 0], b[0, d - 1] = 1, -1
    return _spec("RankOneDiff", b)


def diag_v(d: int, k: int) -> WitnessSpec:
    """``v = sum_{i<=k} e_i (x) e_i``."""
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}")
    return _spec("DiagV", np.eye(k, d))


def grouped_w(d: int, k: int) -> WitnessSpec:
    """``w_i`` = sum of the ``l = d/k`` basis vectors of group ``i``."""
    if k < 1 or d % k:
        raise ValueError(f"k={k} does not divide d={d}")
    ell = d // k
    b = np.zeros((k, d))
    for i in range(k):
        b[i, i * ell:(i + 1) * ell] = 1
    return _spec("GroupedW", b)


def chain_x(d: int) -> WitnessSpec:
    """``x_i = f_i + f_{i+1}`` for ``i = 1..d-1``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    k = d - 1
    b = np.zeros((k, d))
    for i in range(k):
        b[i, i] = b[i, i + 1] = 1
    return _spec("ChainX", b)


def lambda2_w(d: int) -> WitnessSpec:
    """``w = r_1 (x) e_1 + r_2 (x) e_d``."""
    b = np.zeros((2, d))
    b[0, 0] = 1
    b[1, d - 1] = 1
    return _spec("Lambda2W", b)


def witness_matrix(m: MapCombination, w: WitnessSpec, exact: bool | None = None) -> np.ndarray:
    """``(id_k (x) m)(v v^dag)``; exact object array when ``m`` is rational."""
    if w.d != m.d:
        raise ValueError("witness and map dimensions differ")
    if exact is None:
        exact = m.exact
    v = fraction_array(w.vector) if exact else w.vector.astype(float)
    return extend_and_apply(m, w.k, np.outer(v, v))


def choi_vector(w: WitnessSpec, z) -> np.ndarray:
    """Vector ``u`` in ``C^d (x) C^d`` with ``<u|C|u> = <z|(id_k (x) m)(vv^dag)|z>``.

    ``u = sum_i conj(v_i) (x) z_i``, so its Schmidt rank is at most ``k``.
    """
    Z = np.asarray(z, dtype=complex).reshape(w.k, w.d)
    return np.einsum("ia,ib->ab", np.conj(w.blocks.astype(float)), Z).reshape(-1)


# -- closed forms ---------------------------------------------------------


def _exact_pair(x, y):
    return (to_fraction(x), to_fraction(y)) if is_exact(x, y) else (x, y)


def allones_spectrum(d: int, alpha, beta) -> list[tuple]:
    """Spectrum of ``Phi(J_d) = gamma J_d + (alpha + beta) I``."""
    alpha, beta = _exact_pair(alpha, beta)
    s = alpha + beta
    return [(s, d - 1), (d - (d - 1) * s, 1)]


def rankone_diff_spectrum(d: int, alpha, beta) -> list[tuple]:
    """Spectrum of ``Phi(vv^dag)`` for ``v = e_1 - e_d``."""
    alpha, beta = _exact_pair(alpha, beta)
    out = [(2 * alpha / d + beta, 1), (2 - 2 * (d - 1) * alpha / d - beta, 1)]
    if d > 2:
        out.insert(0, (2 * alpha / d, d - 2))
    return out


def diag_spectrum(d: int, k: int, alpha, beta) -> list[tuple]:
    """Spectrum of ``(id_k (x) Phi)(vv^dag)`` for ``v = sum_{i<=k} e_i (x) e_i``.

    The last value equals ``(kd - (kd-1) alpha - d(k-1) beta) / d``.
    """
    alpha, beta = _exact_pair(alpha, beta)
    out = [(alpha / d, k * (d - 1)), (diag_third_unnormalized(d, k, alpha, beta) / d, 1)]
    if k > 1:
        out.insert(1, (alpha / d + beta, k - 1))
    return out


def diag_third_unnormalized(d: int, k: int, alpha, beta):
    alpha, beta = _exact_pair(alpha, beta)
    return k * d - (k * d - 1) * alpha - d * (k - 1) * beta


def grouped_row_sum(d: int, k: int, alpha, beta):
    """Constant row sum of the grouped principal submatrix."""
    alpha, beta = _exact_pair(alpha, beta)
    ell = Fraction(d, k) if is_exact(alpha, beta) else d / k
    gamma = 1 - alpha - beta
    return 1 - (k - 1) * alpha / k + (ell - 1) * gamma + ell * (k - 1) * gamma


def lambda2_triple(d: int, mu, nu) -> tuple:
    mu, nu = _exact_pair(mu, nu)
    t = 1 - (d - 1) * mu / d
    return (t, t - nu, (d + 1) * mu / d + nu - 1)
