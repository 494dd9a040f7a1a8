"""Dense complex and exact-rational matrix helpers.

Complex matrices are plain ``numpy`` arrays (``complex128``).  Exact matrices
are :class:`QMatrix` instances backed by read-only object arrays of
:class:`fractions.Fraction`.

Bipartite indices follow one convention everywhere: the pair ``(i, m)`` of a
``dimA x dimB`` system maps to ``i * dimB + m`` (zero-based).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class BipartiteIndex:
    dimA: int
    dimB: int

    def __post_init__(self):
        if self.dimA < 1 or self.dimB < 1:
            raise ValueError("dimensions must be positive")

    @property
    def size(self) -> int:
        return self.dimA * self.dimB

    def compose(self, i: int, m: int) -> int:
        if not (0 <= i < self.dimA and 0 <= m < self.dimB):
            raise IndexError((i, m))
        return i * self.dimB + m

    def decompose(self, a: int) -> tuple[int, int]:
        if not 0 <= a < self.size:
            raise IndexError(a)
        return divmod(a, self.dimB)


def kron(A, B) -> np.ndarray:
    """Kronecker product, ``(A (x) B)[i*rB + m, j*cB + n] = A[i, j] * B[m, n]``."""
    return np.kron(np.asarray(A), np.asarray(B))


def partial_transpose_second(M, idx: BipartiteIndex) -> np.ndarray:
    """Transpose every ``dimB x dimB`` block of ``M`` in place of the block."""
    M = np.asarray(M)
    n = idx.size
    if M.shape != (n, n):
        raise ValueError(f"matrix of shape {M.shape} does not fit {idx}")
    a, b = idx.dimA, idx.dimB
    T = M.reshape(a, b, a, b).transpose(0, 3, 2, 1)
    return T.reshape(n, n).copy()


def hermitian_defect(M) -> float:
    M = np.asarray(M, dtype=complex)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def hermitize(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return (M + M.conj().T) / 2


def hermitian_spectrum(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix.

    The input is symmetrized before the eigensolve; anything further than
    ``tol`` (entrywise) from Hermitian is rejected with ``ValueError``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("square matrix required")
    if hermitian_defect(M) > tol:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(hermitize(M))


def min_eigenvalue(M) -> float:
    return float(hermitian_spectrum(M)[0])


def principal_submatrix(M, keep: Sequence[int]) -> np.ndarray:
    M = np.asarray(M)
    keep = list(keep)
    n = M.shape[0]
    if len(set(keep)) != len(keep):
        raise ValueError("duplicate index in keep")
    if any(not 0 <= i < n for i in keep):
        raise IndexError("index out of range")
    return M[np.ix_(keep, keep)]


# -- exact rationals ------------------------------------------------------


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def fraction_array(rows) -> np.ndarray:
    """Object array of Fractions from nested sequences (or an existing array)."""
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for pos, v in np.ndenumerate(arr):
        out[pos] = to_fraction(v)
    return out


def fraction_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def fraction_eye(n: int) -> np.ndarray:
    out = fraction_zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


class QMatrix:
    """Immutable matrix of exact rationals."""

    __slots__ = ("_a",)

    def __init__(self, rows):
        a = fraction_array(rows)
        if a.ndim != 2:
            raise ValueError("QMatrix needs a 2-d array")
        a.flags.writeable = False
        self._a = a

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(fraction_eye(n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(fraction_zeros((rows, cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def array(self) -> np.ndarray:
        return self._a

    def __getitem__(self, key):
        return self._a[key]

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self.shape, tuple(self._a.ravel())))

    def __repr__(self):
        return f"QMatrix({self.rows()!r})"

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self._a]

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self._a + other._a)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self._a - other._a)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self._a)

    def __mul__(self, scalar) -> "QMatrix":
        return QMatrix(self._a * to_fraction(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            return QMatrix(self._a.dot(other._a))
        vec = fraction_array(other)
        return self._a.dot(vec)

    @property
    def T(self) -> "QMatrix":
        return QMatrix(self._a.T)

    def is_symmetric(self) -> bool:
        return self == self.T

    def to_float(self) -> np.ndarray:
        return self._a.astype(float)

    def rank(self) -> int:
        return len(_rref(self.rows())[1])

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of the right nullspace, one vector per free column."""
        m, pivots = _rref(self.rows())
        n_cols = self.shape[1]
        free = [c for c in range(n_cols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * n_cols
            v[f] = Fraction(1)
            for row, pc in zip(m, pivots):
                v[pc] = -row[f]
            basis.append(v)
        return basis

    def inverse(self) -> "QMatrix":
        n, c = self.shape
        if n != c:
            raise ValueError("square matrix required")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows())]
        m, pivots = _rref(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return QMatrix([r[n:] for r in m])

    @classmethod
    def vstack(cls, mats: Iterable["QMatrix"]) -> "QMatrix":
        return cls(np.vstack([m._a for m in mats]))


def format_fraction(x) -> str:
    x = to_fraction(x)
    return f"{x.numerator}/{x.denominator}"
