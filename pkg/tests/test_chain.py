from fractions import Fraction

import numpy as np
import pytest
import sympy

from posmap import chain
from posmap.linalg import QMatrix, hermitian_spectrum
from posmap.maps import phi, tomiyama_alpha
from posmap.witnesses import chain_x, witness_matrix

F = Fraction


def test_golden_bit_exact():
    for k in (3, 4):
        gA, gB, gpsi = chain.load_golden(k)
        A, B = chain.build_AB(k)
        assert A == gA and B == gB
        assert chain.build_psi(k) == gpsi
        assert chain.golden_mismatches(k) == {"A": [], "B": [], "psi": []}


def test_golden_spot_entries():
    A, B = chain.build_AB(3)
    assert A[0, 1] == F(-1, 3) and B[0, 0] == F(-1, 2) and B[1, 5] == F(-3, 4)
    A4, B4 = chain.build_AB(4)
    diag = {B4[i, i] for i in range(20)}
    assert F(-3, 5) in diag and F(2, 5) in diag
    assert F(3, 16) in {B4[i, j] for i in range(20) for j in range(20) if i != j}


def test_alt_slope_fails_golden():
    for k in (3, 4):
        mism = chain.golden_mismatches(k, alt_slope=True)
        assert mism["B"] and not mism["A"]


def test_psi_examples():
    assert chain.build_psi(3) == [3, 1, -1, 1, -2, 2, 2, -2, 1, -1, 1, 3]
    assert chain.build_psi(4) == [4, 1, -1, 1, -1, -3, 3, 2, -2, 2, 2, -2, 2, 3, -3, -1, 1, -1, 1, 4]
    assert chain.alternating_m(4) == [4, -3, 2, -1]


def test_k2_affine_and_sympy_nullspace():
    A, B = chain.build_AB(2)
    for a in (F(0), F(1, 3), F(1)):
        direct = QMatrix(witness_matrix(phi(3, a, chain.line_beta(2, a)), chain_x(3), exact=True))
        assert A + B * a == direct
    M = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row]
                      for row in QMatrix.vstack([A, B]).rows()])
    ns = M.nullspace()
    assert len(ns) == 1
    psi = chain.build_psi(2)
    ratio = [sympy.Rational(p) / x for p, x in zip(psi, ns[0]) if x != 0]
    assert len(set(ratio)) == 1 and all(p == 0 for p, x in zip(psi, ns[0]) if x == 0)


@pytest.mark.parametrize("k", range(2, 11))
def test_zero_modes(k):
    rep = chain.verify_zero_mode(k)
    assert rep.success and rep.psi_in_nullspace and rep.mirror_symmetric and rep.gcd == 1
    if rep.nullity is not None:
        assert rep.nullity >= 1
    A, B = chain.build_AB(k)
    assert A.is_symmetric() and B.is_symmetric()


@pytest.mark.parametrize("k", range(3, 8))
def test_chain_min_eig(k):
    A, B = chain.build_AB(k)
    ak = tomiyama_alpha(k + 1, k)
    for a in (F(0), F(3, 10), F(9, 10), ak / 2, ak):
        X = chain.chain_matrix(k, a)
        assert X == A + B * a
        assert abs(hermitian_spectrum(X.to_float())[0]) <= 1e-9


def test_perturbed_matrix_fails_at_row():
    A, B = chain.build_AB(3)
    rows = A.rows()
    rows[5][2] += F(1, 100)
    rep = chain.verify_zero_mode(3, A=QMatrix(rows), B=B, nullity=False)
    assert not rep.success and rep.failing_matrix == "A" and rep.failing_row == 5


def test_mirror_forms():
    for k in range(2, 9):
        psi = chain.build_psi(k)
        assert chain.is_mirror_symmetric(psi, k)
        assert not chain.shifted_mirror_holds(psi, k)


def test_line_coefficients():
    for k in range(2, 8):
        assert chain.line_beta(k, 0) == F(k + 1, k)
        assert chain.line_beta(k, tomiyama_alpha(k + 1, k)) == 0
        assert chain.line_beta(k, tomiyama_alpha(k + 1, k), alt_slope=True) != 0


def test_rational_matrix_io():
    A, _ = chain.build_AB(3)
    assert chain.parse_rational_matrix(chain.format_rational_matrix(A)) == A
    with pytest.raises(ValueError):
        chain.build_AB(1)
