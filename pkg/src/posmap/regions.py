"""Exact parameter-plane geometry for both map families.

Every region is a closed convex polygon with rational vertices, stored both
as a counterclockwise vertex list and as half-planes ``p x + q y <= r`` with
primitive integer coefficients.  Floats entering here are rationalized with
denominator bound ``10**6`` so boundary decisions are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import to_fraction
from .maps import is_exact, named_point, tomiyama_alpha

MAX_DENOMINATOR = 10**6
KINDS = ("CP", "Positive", "KPos", "KPosPlus", "KPosMinus")

Point = tuple[Fraction, Fraction]


def rationalize(x, max_denominator: int = MAX_DENOMINATOR) -> Fraction:
    if is_exact(x):
        return to_fraction(x)
    return Fraction(float(x)).limit_denominator(max_denominator)


def rational_point(point) -> Point:
    x, y = point
    return rationalize(x), rationalize(y)


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Extreme points in counterclockwise order (collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _primitive(p: Fraction, q: Fraction, r: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    den = math.lcm(p.denominator, q.denominator, r.denominator)
    ints = [int(v * den) for v in (p, q, r)]
    g = math.gcd(*ints) or 1
    return tuple(Fraction(v // g) for v in ints)


def _edge_halfplane(a: Point, b: Point) -> tuple[Fraction, Fraction, Fraction]:
    # interior lies to the left of a -> b
    p = b[1] - a[1]
    q = a[0] - b[0]
    return _primitive(p, q, p * a[0] + q * a[1])


@dataclass(frozen=True)
class ParamRegion:
    label: str
    family: str
    d: int
    k: int | None
    vertices: tuple[Point, ...]
    halfplanes: tuple[tuple[Fraction, Fraction, Fraction], ...]
    conjectural: bool = False
    names: tuple[str, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "label": self.label,
            "family": self.family,
            "d": self.d,
            "k": self.k,
            "conjectural": self.conjectural,
            "vertices": [[[x.numerator, x.denominator], [y.numerator, y.denominator]]
                         for x, y in self.vertices],
            "vertex_names": list(self.names),
            "halfplanes": [[int(v) for v in hp] for hp in self.halfplanes],
        }

    def area(self) -> Fraction:
        v = self.vertices
        n = len(v)
        return abs(sum(v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1] for i in range(n))) / 2


def polygon(label: str, family: str, d: int, k: int | None, named: Sequence[tuple[str, Point]],
            conjectural: bool = False) -> ParamRegion:
    """Region spanned by named points; vertex order starts at the first name."""
    lookup = {}
    for name, pt in named:
        lookup.setdefault(pt, name)
    hull = convex_hull(list(lookup))
    start = next(pt for _, pt in named if pt in hull)
    i = hull.index(start)
    hull = hull[i:] + hull[:i]
    if len(hull) < 3:
        raise ValueError(f"degenerate region {label}")
    halfplanes = tuple(_edge_halfplane(hull[j], hull[(j + 1) % len(hull)]) for j in range(len(hull)))
    return ParamRegion(label, family, d, k, tuple(hull), halfplanes, conjectural,
                       tuple(lookup[pt] for pt in hull))


def is_conjectural_case(d: int, k: int) -> bool:
    """True where the k-positive Phi region is only conjectured (for beta > 0)."""
    return 1 < k < d and d % k != 0 and k != d - 1


def region(family: str, kind: str, d: int, k: int | None = None) -> ParamRegion:
    if kind not in KINDS:
        raise ValueError(f"unknown region kind {kind!r}")
    if d < 2:
        raise ValueError("d must be at least 2")
    if kind in ("KPos", "KPosPlus", "KPosMinus"):
        if k is None or not 1 <= k <= d:
            raise ValueError(f"{kind} needs 1 <= k <= d, got k={k}")

    def pts(*names):
        return [(n, named_point(family, n, d, k)) for n in names]

    if family == "phi":
        if kind == "CP":
            return polygon("P_CP", family, d, None, pts("Psi0", "Psi1", "Psi2"))
        if kind == "Positive" or (kind == "KPos" and k == 1):
            return polygon("P_1", family, d, 1, pts("Psi0", "Psi1", "T1", "P"))
        conj = is_conjectural_case(d, k)
        if kind == "KPos":
            return polygon(f"P_{k}", family, d, k, pts("Psi0", "Psi1", "Psi2", "Tk"), conj)
        if kind == "KPosPlus":
            return polygon(f"P_{k}+", family, d, k, pts("Psi0", "Psi1", "Tk"), conj)
        if k == 1:
            return polygon("P_1-", family, d, 1, pts("Psi0", "P", "T1"))
        return polygon(f"P_{k}-", family, d, k, pts("Psi0", "Psi2", "Tk"))
    if family == "lambda":
        if kind == "CP" or (kind == "KPos" and k >= 2):
            label = "P~_CP" if kind == "CP" else f"P~_{k}"
            return polygon(label, family, d, None if kind == "CP" else k, pts("Psi0~", "Psi1~", "Psi2~"))
        if kind == "Positive" or kind == "KPos":
            return polygon("P~_1", family, d, 1, pts("T1~", "P~", "Psi1~", "Psi0~"))
        raise ValueError(f"{kind} is not defined for the lambda family")
    raise ValueError(f"unknown family {family!r}")


def kpos_region(family: str, d: int, k: int) -> ParamRegion:
    return region(family, "KPos", d, k)


def slacks(r: ParamRegion, point) -> list[Fraction]:
    x, y = rational_point(point)
    return [c - p * x - q * y for p, q, c in r.halfplanes]


def contains(r: ParamRegion, point, mode: str = "closed", margin=None) -> bool:
    """Exact membership test.

    ``mode`` is ``"closed"``, ``"strict"`` or ``"margin"``; in margin mode the
    point must lie at Euclidean distance at least ``margin`` from every edge
    line (i.e. inside the polygon shrunk by ``margin``).
    """
    s = slacks(r, point)
    if mode == "closed":
        return all(v >= 0 for v in s)
    if mode == "strict":
        return all(v > 0 for v in s)
    if mode == "margin":
        if margin is None:
            raise ValueError("margin mode needs a margin")
        eps = rationalize(margin)
        return all(v >= 0 and v * v >= eps * eps * (p * p + q * q) for v, (p, q, _) in zip(s, r.halfplanes))
    raise ValueError(f"unknown mode {mode!r}")


def outside_by(r: ParamRegion, point, margin) -> bool:
    """True if some edge line is violated by distance at least ``margin``.

    This implies the true distance to the region is at least ``margin``.
    """
    eps = rationalize(margin)
    return any(v < 0 and v * v >= eps * eps * (p * p + q * q) for v, (p, q, _) in zip(slacks(r, point), r.halfplanes))


def boundary_distance(r: ParamRegion, point) -> float:
    """Distance to the boundary, positive inside, negative outside.

    Outside the value is a lower bound on the true distance (largest edge
    violation).
    """
    d = [float(v) / math.hypot(p, q) for v, (p, q, _) in zip(slacks(r, point), r.halfplanes)]
    lo = min(d)
    return lo if lo >= 0 else -max(-v for v in d if v < 0)


def on_boundary(r: ParamRegion, point) -> bool:
    return contains(r, point) and not contains(r, point, "strict")


def zero_slice(r: ParamRegion) -> tuple[Fraction, Fraction] | None:
    """The interval cut out of the region by the line ``y = 0``."""
    xs = []
    v = r.vertices
    for i in range(len(v)):
        (x0, y0), (x1, y1) = v[i], v[(i + 1) % len(v)]
        if y0 == 0:
            xs.append(x0)
        if (y0 < 0 < y1) or (y1 < 0 < y0):
            xs.append(x0 + (x1 - x0) * (-y0) / (y1 - y0))
    if not xs:
        return None
    return min(xs), max(xs)


def tomiyama_interval(family: str, d: int, k: int) -> tuple[Fraction, Fraction]:
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}")
    if family == "phi":
        return Fraction(0), tomiyama_alpha(d, k)
    if family == "lambda":
        if k == 1:
            return Fraction(0), Fraction(d, d - 1)
        return Fraction(d, d + 1), Fraction(d, d - 1)
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class Line:
    """``p x + q y = r``."""
    p: Fraction
    q: Fraction
    r: Fraction
    label: str = ""

    def contains(self, point) -> bool:
        x, y = rational_point(point)
        return self.p * x + self.q * y == self.r

    def x_at(self, y) -> Fraction:
        return (self.r - self.q * rationalize(y)) / self.p

    def y_at(self, x) -> Fraction:
        return (self.r - self.p * rationalize(x)) / self.q


def cho_lines_d3() -> tuple[Line, Line]:
    """The two boundary lines of the 2-positive Cho maps with b = c, d = 3.

    ``a = 2`` gives ``8 alpha + 6 beta = 9`` (through Psi1, Psi2) and
    ``b = 2(2 - a)`` gives ``5 alpha + 4 beta = 6`` (through Psi1, T2).
    """
    first = Line(Fraction(8), Fraction(6), Fraction(9), "a=2")
    second = Line(Fraction(5), Fraction(4), Fraction(6), "b=2(2-a)")
    psi1, psi2 = named_point("phi", "Psi1", 3), named_point("phi", "Psi2", 3)
    t2 = named_point("phi", "Tk", 3, 2)
    if not (first.contains(psi1) and first.contains(psi2)):
        raise AssertionError("a=2 line misses Psi1 or Psi2")
    if not (second.contains(psi1) and second.contains(t2)):
        raise AssertionError("b=2(2-a) line misses Psi1 or T2")
    p2 = region("phi", "KPos", 3, 2)
    probe = (second.x_at(Fraction(-1, 4)), Fraction(-1, 4))
    if contains(p2, probe):
        raise AssertionError("b=2(2-a) line should leave P_2 for beta < 0")
    return first, second


def _solve2(a, b, c, e, f, g):
    # [a b; c e] [s; t] = [f; g]
    det = a * e - b * c
    if det == 0:
        return None
    return (f * e - b * g) / det, (a * g - f * c) / det


def _barycentric(point: Point, tri: Sequence[Point]):
    (x0, y0), (x1, y1), (x2, y2) = tri
    st = _solve2(x1 - x0, x2 - x0, y1 - y0, y2 - y0, point[0] - x0, point[1] - y0)
    if st is None:
        return None
    s, t = st
    return [1 - s - t, s, t]


def _segment_weights(point: Point, a: Point, b: Point):
    if a == b:
        return [Fraction(1), Fraction(0)] if point == a else None
    if _cross(a, b, point) != 0:
        return None
    i = 0 if a[0] != b[0] else 1
    t = (point[i] - a[i]) / (b[i] - a[i])
    if not 0 <= t <= 1:
        return None
    return [1 - t, t]


def convex_combination(point, vertices: Sequence) -> list[Fraction]:
    """Nonnegative rational weights reproducing ``point`` from ``vertices``.

    Quadrilaterals (given in cyclic order) are split along the diagonal from
    the first vertex.
    """
    p = rational_point(point)
    verts = [rational_point(v) for v in vertices]
    n = len(verts)
    if not 1 <= n <= 4:
        raise ValueError("between one and four vertices supported")
    if n == 1:
        if p == verts[0]:
            return [Fraction(1)]
        raise ValueError("point outside hull")
    if n == 2:
        w = _segment_weights(p, *verts)
        if w is None:
            raise ValueError("point outside hull")
        return w
    if n == 3:
        w = _barycentric(p, verts)
        if w is None:
            for i, j in ((0, 1), (1, 2), (0, 2)):
                sw = _segment_weights(p, verts[i], verts[j])
                if sw is not None:
                    w = [Fraction(0)] * 3
                    w[i], w[j] = sw
                    return w
            raise ValueError("point outside hull")
        if min(w) < 0:
            raise ValueError("point outside hull")
        return w
    for tri in ((0, 1, 2), (0, 2, 3)):
        try:
            tw = convex_combination(p, [verts[i] for i in tri])
        except ValueError:
            continue
        w = [Fraction(0)] * 4
        for i, v in zip(tri, tw):
            w[i] = v
        return w
    raise ValueError("point outside hull")
