from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posmap import certify, witnesses
from posmap.choi import build_choi, expand_multiset
from posmap.linalg import hermitian_spectrum
from posmap.maps import lam, named_point, phi, tomiyama_alpha

F = Fraction


def sorted_float(pairs):
    return np.sort(np.array(expand_multiset(pairs), dtype=float))


def test_vector_shapes():
    assert witnesses.diag_v(4, 2).vector.tolist() == [1, 0, 0, 0, 0, 1, 0, 0]
    assert witnesses.grouped_w(4, 2).blocks.tolist() == [[1, 1, 0, 0], [0, 0, 1, 1]]
    assert witnesses.chain_x(3).blocks.tolist() == [[1, 1, 0], [0, 1, 1]]
    assert witnesses.lambda2_w(3).blocks.tolist() == [[1, 0, 0], [0, 0, 1]]
    with pytest.raises(ValueError):
        witnesses.grouped_w(5, 2)
    with pytest.raises(ValueError):
        witnesses.diag_v(3, 4)


@pytest.mark.parametrize("d", range(2, 7))
def test_allones_and_rankone(d, rng):
    assert witnesses.allones_spectrum(d, 0, 0) == [(0, d - 1), (d, 1)]
    assert (0, 1) in witnesses.allones_spectrum(d, F(d, d - 1), 0)
    for _ in range(10):
        a, b = rng.uniform(-1, 2, 2)
        m = phi(d, a, b)
        ev = hermitian_spectrum(witnesses.witness_matrix(m, witnesses.allones(d)))
        assert np.max(np.abs(ev - sorted_float(witnesses.allones_spectrum(d, a, b)))) <= 1e-10
        ev = hermitian_spectrum(witnesses.witness_matrix(m, witnesses.rankone_diff(d)))
        assert np.max(np.abs(ev - sorted_float(witnesses.rankone_diff_spectrum(d, a, b)))) <= 1e-10


def test_rankone_examples():
    d = 3
    a = F(3, 10)
    assert min(expand_multiset(witnesses.rankone_diff_spectrum(d, a, -2 * a / d))) == 0
    assert certify.witness_rankone_diff(3, 1, -1) < 0
    assert abs(certify.witness_rankone_diff(3, 0, 0)) <= 1e-15


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data(), st.floats(-1, 2), st.floats(-1, 2))
def test_diag_spectrum_property(d, data, a, b):
    k = data.draw(st.integers(1, d))
    res = certify.kpos_witness_diag(d, k, a, b)
    assert np.max(np.abs(res.numeric - sorted_float(res.spectrum))) <= 1e-10
    assert np.isclose(float(res.spectrum[-1][0]), float(res.third_unnormalized) / d)


def test_diag_examples():
    for d in range(2, 6):
        third = witnesses.diag_spectrum(d, d, tomiyama_alpha(d, d), 0)[-1]
        assert third == (0, 1)
    assert witnesses.diag_third_unnormalized(3, 2, F(3, 2), F(-1, 2)) == 0
    assert certify.kpos_witness_diag(3, 2, 1.5, -0.6).verdict.refuted
    assert not certify.kpos_witness_diag(3, 2, 1.0, -0.3).verdict.refuted


@pytest.mark.parametrize("d,k", [(4, 2), (6, 2), (6, 3), (8, 4)])
def test_grouped_row_sum(d, k, rng):
    line = lambda a: (k * d - (k * d - 1) * a) / (k * (d - 1))  # noqa: E731
    for a in (F(0), F(1, 3), tomiyama_alpha(d, k)):
        res = certify.kpos_witness_grouped(d, k, a, line(a))
        assert res.row_sum == 0
        assert res.row_sum == witnesses.grouped_row_sum(d, k, a, line(a))
    for _ in range(5):
        a, b = rng.uniform(-1, 2, 2)
        res = certify.kpos_witness_grouped(d, k, a, b)
        assert np.isclose(float(res.row_sum), float(witnesses.grouped_row_sum(d, k, a, b)))
        ev = np.linalg.eigvalsh(np.asarray(res.W, dtype=float))
        assert np.min(np.abs(ev - float(res.row_sum))) <= 1e-9


def test_grouped_examples():
    assert certify.kpos_witness_grouped(4, 2, F(8, 7), 0).row_sum == 0
    assert certify.kpos_witness_grouped(4, 2, 0, 0).row_sum == 4
    res = certify.kpos_witness_grouped(6, 3, F(18, 17) + F(1, 20), 0)
    assert res.row_sum < 0 and res.verdict.refuted
    with pytest.raises(ValueError):
        certify.kpos_witness_grouped(5, 2, 0, 0)


def test_grouped_lambda_nonnegativity_is_the_line():
    # lambda >= 0 iff (kd-1) alpha + k(d-1) beta <= kd
    d, k = 6, 2
    for a in (F(-1), F(0), F(1, 2), F(1)):
        for b in (F(-1), F(0), F(1, 2), F(2)):
            lam_ = witnesses.grouped_row_sum(d, k, a, b)
            assert (lam_ >= 0) == ((k * d - 1) * a + k * (d - 1) * b <= k * d)


def test_lambda2_examples():
    assert certify.lambda_2pos_witness(3, F(3, 4), 0)[2] == 0
    assert certify.lambda_2pos_witness(3, 0, 1) == (1, 0, 0)
    assert certify.lambda_2pos_witness(4, F(4, 3), F(-2, 3)) == (0, F(2, 3), 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.floats(-1, 2), st.floats(-2, 2))
def test_lambda2_triple_matches_eigensolve(d, mu, nu):
    t = certify.lambda_2pos_witness(d, mu, nu)
    ev = hermitian_spectrum(witnesses.witness_matrix(lam(d, mu, nu), witnesses.lambda2_w(d)))
    for v in t:
        assert np.min(np.abs(ev - float(v))) <= 1e-9


def test_choi_vector_identity(rng):
    d = 4
    m = phi(d, 0.7, 0.2)
    C = build_choi(m).matrix
    for w in (witnesses.diag_v(d, 3), witnesses.chain_x(d), witnesses.grouped_w(d, 2)):
        X = witnesses.witness_matrix(m, w)
        z = rng.standard_normal(w.k * d) + 1j * rng.standard_normal(w.k * d)
        u = witnesses.choi_vector(w, z)
        assert abs(np.vdot(z, X @ z) - np.vdot(u, C @ u)) <= 1e-10
        assert certify.schmidt_rank(u, d) <= w.k


def test_psi2_tk_line_zero():
    for d in range(2, 7):
        for k in range(1, d + 1):
            p2, tk = named_point("phi", "Psi2", d), named_point("phi", "Tk", d, k)
            for t in (F(0), F(1, 5), F(1)):
                pt = tuple(p2[i] + t * (tk[i] - p2[i]) for i in range(2))
                assert witnesses.diag_third_unnormalized(d, k, *pt) == 0
