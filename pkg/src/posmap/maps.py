"""The map families as coefficient combinations of identity, trace, diagonal
and transposition.

A :class:`MapCombination` ``(c_id, c_tau, c_diag, c_T)`` acts as

    X -> c_id X + c_tau Tr(X) I/d + c_diag Diag(X) + c_T X^T

Coefficients stay exact (``Fraction``) when built from rationals, so identities
between named maps can be checked without rounding.  Applying a map to a float
or complex array converts the coefficients to floats first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

import numpy as np

from .linalg import BipartiteIndex, fraction_eye, to_fraction

FAMILIES = ("phi", "lambda")


def is_exact(*values) -> bool:
    return all(isinstance(v, Rational) and not isinstance(v, bool) for v in values)


def _coerce(x):
    if is_exact(x):
        return to_fraction(x)
    if isinstance(x, Real):
        return float(x)
    raise TypeError(f"coefficient must be real, got {x!r}")


@dataclass(frozen=True)
class MapCombination:
    d: int
    c_id: Real
    c_tau: Real
    c_diag: Real
    c_T: Real
    label: str = ""

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.d}")
        names = ("c_id", "c_tau", "c_diag", "c_T")
        exact = is_exact(*(getattr(self, n) for n in names))
        for name in names:
            v = _coerce(getattr(self, name))
            object.__setattr__(self, name, v if exact else float(v))

    @property
    def coefficients(self) -> tuple:
        return (self.c_id, self.c_tau, self.c_diag, self.c_T)

    @property
    def exact(self) -> bool:
        return is_exact(*self.coefficients)

    def is_unital(self) -> bool:
        return sum(self.coefficients) == 1

    def float_coefficients(self) -> tuple[float, float, float, float]:
        return tuple(float(c) for c in self.coefficients)

    def same_map(self, other: "MapCombination") -> bool:
        return self.d == other.d and self.coefficients == other.coefficients


def phi(d: int, alpha, beta, label: str = "") -> MapCombination:
    """(1 - alpha - beta) id + alpha tau0 + beta Diag."""
    return MapCombination(d, 1 - alpha - beta, alpha, beta, 0, label)


def lam(d: int, mu, nu, label: str = "") -> MapCombination:
    """(1 - mu - nu) T + mu tau0 + nu Diag."""
    return MapCombination(d, 0, mu, nu, 1 - mu - nu, label)


def family_map(family: str, d: int, x, y, label: str = "") -> MapCombination:
    if family == "phi":
        return phi(d, x, y, label)
    if family == "lambda":
        return lam(d, x, y, label)
    raise ValueError(f"unknown family {family!r}")


def combine(weights, maps) -> MapCombination:
    """Linear combination ``sum w_i m_i`` of maps on the same dimension."""
    maps = list(maps)
    d = maps[0].d
    if any(m.d != d for m in maps):
        raise ValueError("maps act on different dimensions")
    coeffs = [sum(w * m.coefficients[i] for w, m in zip(weights, maps)) for i in range(4)]
    return MapCombination(d, *coeffs)


def apply_map(m: MapCombination, X) -> np.ndarray:
    X = np.asarray(X)
    d = m.d
    if X.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got shape {X.shape}")
    if X.dtype == object:
        c_id, c_tau, c_diag, c_T = m.coefficients
        eye = fraction_eye(d)
    else:
        c_id, c_tau, c_diag, c_T = m.float_coefficients()
        eye = np.eye(d)
    out = c_id * X + (c_tau * np.trace(X) / d) * eye + c_diag * np.diag(np.diag(X)) + c_T * X.T
    return out


def extend_and_apply(m: MapCombination, k: int, R) -> np.ndarray:
    """``(id_k (x) m)(R)``: apply ``m`` to each ``d x d`` block of ``R``."""
    R = np.asarray(R)
    d = m.d
    if k < 1 or R.shape != (k * d, k * d):
        raise ValueError(f"expected a {k * d}x{k * d} matrix, got shape {R.shape}")
    out = np.empty_like(R) if R.dtype == object else np.empty(R.shape, dtype=np.result_type(R, float))
    for i in range(k):
        for j in range(k):
            out[i * d:(i + 1) * d, j * d:(j + 1) * d] = apply_map(m, R[i * d:(i + 1) * d, j * d:(j + 1) * d])
    return out


def superoperator(m: MapCombination) -> np.ndarray:
    """Matrix ``S`` with ``vec(m(X)) = S vec(X)`` for row-major ``vec``."""
    d = m.d
    S = np.zeros((d * d, d * d))
    idx = BipartiteIndex(d, d)
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d))
            E[i, j] = 1.0
            S[:, idx.compose(i, j)] = apply_map(m, E).ravel()
    return S


# -- named maps -----------------------------------------------------------

PHI_NAMES = ("Psi0", "Psi1", "Psi2", "T1", "Tk", "P")
LAMBDA_NAMES = ("Psi0~", "Psi1~", "Psi2~", "T1~", "T2~", "P~")


def tomiyama_alpha(d: int, k: int) -> Fraction:
    return Fraction(k * d, k * d - 1)


def named_point(family: str, name: str, d: int, k: int | None = None) -> tuple[Fraction, Fraction]:
    """Exact parameter point of a named map."""
    q = Fraction(d, d - 1)
    if family == "phi":
        if name == "Tk":
            if k is None or not 1 <= k <= d:
                raise ValueError(f"Tk needs 1 <= k <= d, got k={k}")
            return (tomiyama_alpha(d, k), Fraction(0))
        table = {
            "Psi0": (Fraction(0), Fraction(0)),
            "Psi1": (Fraction(0), q),
            "Psi2": (q, Fraction(-1, d - 1)),
            "T1": (q, Fraction(0)),
            "P": (q, Fraction(-2, d - 1)),
        }
    elif family == "lambda":
        table = {
            "Psi0~": (q, Fraction(0)),
            "Psi1~": (q, Fraction(-2, d - 1)),
            "Psi2~": (Fraction(0), Fraction(1)),
            "T1~": (Fraction(0), Fraction(0)),
            "P~": (Fraction(0), q),
            "T2~": (Fraction(d, d + 1), Fraction(0)),
        }
    else:
        raise ValueError(f"unknown family {family!r}")
    if name not in table:
        raise ValueError(f"unknown {family} map {name!r}")
    return table[name]


@dataclass(frozen=True)
class NamedMap:
    family: str
    name: str
    d: int
    k: int | None = None

    @property
    def point(self) -> tuple[Fraction, Fraction]:
        return named_point(self.family, self.name, self.d, self.k)


def named_map(n: NamedMap) -> MapCombination:
    x, y = n.point
    label = n.name if n.k is None else f"{n.name}[k={n.k}]"
    return family_map(n.family, n.d, x, y, label)


# -- Cho map on M_3 -------------------------------------------------------


@dataclass(frozen=True)
class ChoParams:
    a: Real
    b: Real
    c: Real

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise ValueError("Cho parameters must be nonnegative")


def cho_map(p: ChoParams, X) -> np.ndarray:
    """Diagonal part ``(a+1) x_ii + b x_{i+1,i+1} + c x_{i+2,i+2}`` minus ``X``."""
    X = np.asarray(X)
    if X.shape != (3, 3):
        raise ValueError("the Cho map acts on 3x3 matrices")
    x = np.diag(X)
    diag = [(p.a + 1) * x[i] + p.b * x[(i + 1) % 3] + p.c * x[(i + 2) % 3] for i in range(3)]
    return np.diag(np.array(diag, dtype=X.dtype if X.dtype == object else np.result_type(X, float))) - X


def phi_from_cho(a, b) -> tuple:
    """(alpha, beta) with Phi_[a,b,b] = (a + 2b) Phi_{alpha,beta} on M_3."""
    if is_exact(a, b):
        a, b = to_fraction(a), to_fraction(b)
    s = a + 2 * b
    if s == 0:
        raise ValueError("a + 2b must be nonzero")
    return 3 * b / s, (a - b + 1) / s


def cho_from_phi(alpha, beta) -> tuple:
    """Inverse of :func:`phi_from_cho`; undefined on the line alpha + beta = 1."""
    if is_exact(alpha, beta):
        alpha, beta = to_fraction(alpha), to_fraction(beta)
    s = alpha + beta - 1
    if s == 0:
        raise ValueError("alpha + beta = 1 has no Cho representative")
    return (1 - 2 * alpha / 3) / s, alpha / (3 * s)
