import csv
import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from posmap import regions
from posmap.maps import named_point, tomiyama_alpha

F = Fraction


def all_regions(d):
    out = [regions.region("phi", "CP", d), regions.region("phi", "Positive", d),
           regions.region("lambda", "CP", d), regions.region("lambda", "Positive", d)]
    for k in range(1, d + 1):
        out += [regions.region("phi", kind, d, k) for kind in ("KPos", "KPosPlus", "KPosMinus")]
        out.append(regions.region("lambda", "KPos", d, k))
    return out


@pytest.mark.parametrize("d", range(2, 9))
def test_region_structure(d):
    for r in all_regions(d):
        v = r.vertices
        n = len(v)
        # counterclockwise
        assert sum(v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1] for i in range(n)) > 0
        for pt in v:
            s = regions.slacks(r, pt)
            assert all(x >= 0 for x in s)
            assert sum(x == 0 for x in s) >= 2
        hull = ConvexHull(np.array(v, dtype=float))
        assert len(hull.vertices) == n
        assert abs(hull.volume - float(r.area())) <= 1e-12


def test_vertex_lists():
    d = 3
    assert regions.region("phi", "CP", d).names == ("Psi0", "Psi2", "Psi1")
    assert set(regions.region("phi", "Positive", d).names) == {"Psi0", "Psi1", "T1", "P"}
    assert set(regions.region("phi", "KPos", 5, 2).names) == {"Psi0", "Psi1", "Psi2", "Tk"}
    assert regions.region("phi", "KPos", d, 1).vertices == regions.region("phi", "Positive", d).vertices
    lam3 = regions.region("lambda", "KPos", 3, 2)
    assert set(lam3.vertices) == {(F(3, 2), 0), (F(3, 2), -1), (0, 1)}
    for r in all_regions(4):
        assert r.vertices[0] in {named_point(r.family, "Psi0" if r.family == "phi" else n, 4)
                                 for n in ("Psi0~", "T1~")}
    with pytest.raises(ValueError):
        regions.region("phi", "Weird", 3)
    with pytest.raises(ValueError):
        regions.region("lambda", "KPosPlus", 3, 2)
    with pytest.raises(ValueError):
        regions.region("phi", "KPos", 3, 4)


@pytest.mark.parametrize("d", range(2, 9))
def test_phi_kpos_halfplanes(d):
    for k in range(2, d + 1):
        r = regions.kpos_region("phi", d, k)
        expected = {regions._primitive(F(-1), F(0), F(0)),
                    regions._primitive(F(-1, d), F(-1), F(0)),
                    regions._primitive(F(k * d - 1), F(k * (d - 1)), F(k * d)),
                    regions._primitive(F(k * d - 1), F(d * (k - 1)), F(k * d))}
        assert set(r.halfplanes) <= expected
    assert regions.kpos_region("phi", d, d).vertices == regions.region("phi", "CP", d).vertices


@pytest.mark.parametrize("d", range(2, 9))
def test_nesting_and_slices(d):
    cp = regions.region("phi", "CP", d)
    chain = [regions.region("phi", "Positive", d)] + [regions.kpos_region("phi", d, k) for k in range(1, d + 1)]
    for outer, inner in zip(chain, chain[1:]):
        assert all(regions.contains(outer, v) for v in inner.vertices)
    assert all(regions.contains(chain[-1], v) for v in cp.vertices)
    for k in range(1, d + 1):
        for fam in ("phi", "lambda"):
            assert regions.zero_slice(regions.kpos_region(fam, d, k)) == regions.tomiyama_interval(fam, d, k)
        if k >= 2:
            plus = regions.region("phi", "KPosPlus", d, k)
            minus = regions.region("phi", "KPosMinus", d, k)
            full = regions.kpos_region("phi", d, k)
            assert set(full.vertices) <= set(plus.vertices) | set(minus.vertices)
            assert all(v[1] >= 0 for v in plus.vertices) and all(v[1] <= 0 for v in minus.vertices)
            shared = set(plus.vertices) & set(minus.vertices)
            assert shared == {(0, 0), (tomiyama_alpha(d, k), 0)}
            lam_k = regions.kpos_region("lambda", d, k)
            assert lam_k.vertices == regions.region("lambda", "CP", d).vertices


def test_tomiyama_intervals():
    assert regions.tomiyama_interval("phi", 3, 2) == (0, F(6, 5))
    assert regions.tomiyama_interval("lambda", 3, 2) == (F(3, 4), F(3, 2))
    assert regions.tomiyama_interval("phi", 2, 2) == (0, F(4, 3))
    with pytest.raises(ValueError):
        regions.tomiyama_interval("phi", 3, 0)


def test_contains_modes():
    assert regions.contains(regions.region("phi", "CP", 3), (0, 0))
    assert not regions.contains(regions.region("phi", "CP", 3), (0, 0), "strict")
    assert not regions.contains(regions.region("phi", "Positive", 3), (1.5, 0.01))
    p2 = regions.kpos_region("phi", 3, 2)
    assert regions.contains(p2, (F(6, 5), 0)) and regions.on_boundary(p2, (F(6, 5), 0))
    cp = regions.region("phi", "CP", 3)
    assert regions.contains(cp, (0.5, 0.2), "margin", 0.02)
    assert not regions.contains(cp, (0.01, 0.5), "margin", 0.02)
    with pytest.raises(ValueError):
        regions.contains(cp, (0, 0), "margin")
    with pytest.raises(ValueError):
        regions.contains(cp, (0, 0), "fuzzy")


@settings(max_examples=200, deadline=None)
@given(st.floats(-2, 3), st.floats(-2, 3), st.floats(0.001, 0.3))
def test_margin_and_outside_are_sound(x, y, eps):
    from shapely.geometry import Point, Polygon
    r = regions.region("phi", "Positive", 4)
    poly = Polygon([(float(a), float(b)) for a, b in r.vertices])
    p = regions.rational_point((x, y))
    dist = poly.exterior.distance(Point(float(p[0]), float(p[1])))
    if regions.contains(r, p, "margin", eps):
        assert poly.covers(Point(float(p[0]), float(p[1]))) and dist >= eps - 1e-9
    if regions.outside_by(r, p, eps):
        assert not poly.contains(Point(float(p[0]), float(p[1]))) and dist >= eps - 1e-9


def test_floats_are_rationalized():
    assert regions.rationalize(0.1) == F(1, 10)
    assert regions.rationalize(F(1, 3)) == F(1, 3)
    assert regions.rational_point((1.5, 2)) == (F(3, 2), 2)


def test_cho_lines():
    line1, line2 = regions.cho_lines_d3()
    assert line1.y_at(0) == F(3, 2)
    assert line2.x_at(0) == F(6, 5)
    assert line2.x_at(F(-1, 2)) == F(8, 5)
    assert not regions.contains(regions.kpos_region("phi", 3, 2), (F(8, 5), F(-1, 2)))
    assert (line1.p, line1.q, line1.r) == (8, 6, 9) and (line2.p, line2.q, line2.r) == (5, 4, 6)


def test_convex_combination_examples():
    d = 5
    w = regions.convex_combination(named_point("phi", "Psi2", d),
                                   [named_point("phi", "T1", d), named_point("phi", "P", d)])
    assert w == [F(1, 2), F(1, 2)]
    w = regions.convex_combination(named_point("lambda", "T2~", d),
                                   [named_point("lambda", "Psi1~", d), named_point("lambda", "Psi2~", d)])
    assert w == [F(d - 1, d + 1), F(2, d + 1)]
    w = regions.convex_combination(named_point("lambda", "Psi2~", d),
                                   [named_point("lambda", "T1~", d), named_point("lambda", "P~", d)])
    assert w == [F(1, d), F(d - 1, d)]
    with pytest.raises(ValueError):
        regions.convex_combination((5, 5), regions.region("phi", "CP", 3).vertices)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.fractions(-1, 3, max_denominator=50), st.fractions(-2, 3, max_denominator=50))
def test_convex_combination_reproduces_point(d, x, y):
    r = regions.region("phi", "Positive", d)
    if not regions.contains(r, (x, y)):
        return
    w = regions.convex_combination((x, y), r.vertices)
    assert all(wi >= 0 for wi in w) and sum(w) == 1
    assert sum(wi * v[0] for wi, v in zip(w, r.vertices)) == x
    assert sum(wi * v[1] for wi, v in zip(w, r.vertices)) == y


def test_region_json():
    js = regions.kpos_region("phi", 3, 2).to_json()
    assert js["vertices"][0] == [[0, 1], [0, 1]]
    assert [[6, 5], [0, 1]] in js["vertices"]
    assert all(isinstance(c, int) for hp in js["halfplanes"] for c in hp)
    assert js["conjectural"] is False and regions.kpos_region("phi", 5, 2).to_json()["conjectural"] is True


def test_conjectural_cases():
    assert regions.is_conjectural_case(5, 2)
    assert not regions.is_conjectural_case(4, 2)
    assert not regions.is_conjectural_case(5, 4)
    assert not regions.is_conjectural_case(5, 1) and not regions.is_conjectural_case(5, 5)
