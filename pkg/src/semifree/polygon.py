"""Rational polygons whose edge offsets may depend affinely on a level ``t``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Optional, Sequence, Union

from .exact_linalg import det, primitive

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


@dataclass(frozen=True)
class Affine:
    """The function ``t -> a + b*t``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))

    @classmethod
    def const(cls, a) -> "Affine":
        return cls(as_fraction(a), Fraction(0))

    def __call__(self, t) -> Fraction:
        return self.a + self.b * as_fraction(t)

    def __add__(self, other):
        other = _lift(other)
        return Affine(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        return Affine(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _lift(other) - self

    def __neg__(self):
        return Affine(-self.a, -self.b)

    def __mul__(self, c):
        if isinstance(c, Affine):
            if c.b == 0:
                c = c.a
            elif self.b == 0:
                return c * self.a
            else:
                raise ValueError("product of two non-constant affine functions")
        c = as_fraction(c)
        return Affine(self.a * c, self.b * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_fraction(c)
        return Affine(self.a / c, self.b / c)

    @property
    def is_constant(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        return format_affine(self)


def _lift(x) -> Affine:
    return x if isinstance(x, Affine) else Affine.const(x)


def format_fraction(x: Fraction) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_affine(f: Affine, var: str = "t") -> str:
    if f.b == 0:
        return format_fraction(f.a)
    if f.b == 1:
        tpart = var
    elif f.b == -1:
        tpart = f"-{var}"
    else:
        tpart = f"{format_fraction(f.b)}*{var}"
    if f.a == 0:
        return tpart
    sign = "-" if tpart.startswith("-") else "+"
    return f"{format_fraction(f.a)} {sign} {tpart.lstrip('-')}"


@dataclass(frozen=True)
class Quadratic:
    """``c0 + c1*t + c2*t^2`` with exact coefficients."""

    c0: Fraction
    c1: Fraction
    c2: Fraction

    def __call__(self, t) -> Fraction:
        t = as_fraction(t)
        return self.c0 + self.c1 * t + self.c2 * t * t

    def coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2)


def _mul_affine(f: Affine, g: Affine) -> Quadratic:
    return Quadratic(f.a * g.a, f.a * g.b + f.b * g.a, f.b * g.b)


# -- angular order ---------------------------------------------------------


def _half(v) -> int:
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_ccw(vectors: Iterable[Sequence[int]]) -> list:
    return sorted(vectors, key=cmp_to_key(_angle_cmp))


# -- polygons --------------------------------------------------------------


@dataclass(frozen=True)
class PolygonEdge:
    normal: tuple[int, int]
    offset: Affine
    carriers: tuple[str, ...] = ()
    excluded: bool = False

    @property
    def direction(self) -> tuple[int, int]:
        """Primitive edge direction, counterclockwise around the polygon."""
        n1, n2 = self.normal
        return (n2, -n1)


@dataclass(frozen=True)
class HalfPlane:
    normal: tuple[int, int]
    offset: Affine
    carriers: tuple[str, ...] = ()
    excluded: bool = False


class PolygonError(ValueError):
    pass


@dataclass(frozen=True)
class DelzantPolygon:
    """Polygon ``{s : <n_i, s> >= c_i(t)}`` with edges listed counterclockwise.

    Vertex ``i`` is the corner between edge ``i`` and edge ``i+1``.
    ``t`` is set for a concrete slice, ``interval`` for a symbolic one.
    """

    edges: tuple[PolygonEdge, ...]
    t: Optional[Fraction] = None
    interval: Optional[tuple[Fraction, Fraction]] = None
    basis: Optional[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = None
    xi: Optional[tuple[int, ...]] = None
    critical_corners: tuple[int, ...] = ()
    degenerate: tuple[HalfPlane, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def symbolic(self) -> bool:
        return self.interval is not None

    @property
    def compact(self) -> bool:
        return not any(e.excluded for e in self.edges)

    def sample_level(self) -> Fraction:
        if self.t is not None:
            return self.t
        if self.interval is not None:
            lo, hi = self.interval
            return (lo + hi) / 2
        return Fraction(0)

    def vertices(self) -> list[tuple[Affine, Affine]]:
        out = []
        n = len(self.edges)
        for i in range(n):
            out.append(_meet(self.edges[i], self.edges[(i + 1) % n]))
        return out

    def vertices_at(self, t=None) -> list[tuple[Fraction, Fraction]]:
        t = self.sample_level() if t is None else as_fraction(t)
        return [(x(t), y(t)) for x, y in self.vertices()]

    def lengths(self) -> list[Affine]:
        """Lattice length of every edge, affine in ``t``."""
        verts = self.vertices()
        out = []
        for i, e in enumerate(self.edges):
            p, q = verts[i - 1], verts[i]
            d = e.direction
            num = (q[0] - p[0]) * d[0] + (q[1] - p[1]) * d[1]
            out.append(num / (d[0] * d[0] + d[1] * d[1]))
        return out

    def lengths_at(self, t=None) -> list[Fraction]:
        t = self.sample_level() if t is None else as_fraction(t)
        return [f(t) for f in self.lengths()]

    def area(self) -> Quadratic:
        """Euclidean area in the slice lattice coordinates (normalized so a unit square is 1)."""
        verts = self.vertices()
        total = Quadratic(Fraction(0), Fraction(0), Fraction(0))
        n = len(verts)
        for i in range(n):
            (x0, y0), (x1, y1) = verts[i], verts[(i + 1) % n]
            q1, q2 = _mul_affine(x0, y1), _mul_affine(x1, y0)
            total = Quadratic(
                total.c0 + q1.c0 - q2.c0, total.c1 + q1.c1 - q2.c1, total.c2 + q1.c2 - q2.c2
            )
        return Quadratic(total.c0 / 2, total.c1 / 2, total.c2 / 2)

    def at(self, t) -> "DelzantPolygon":
        t = as_fraction(t)
        edges = tuple(
            PolygonEdge(e.normal, Affine.const(e.offset(t)), e.carriers, e.excluded) for e in self.edges
        )
        return DelzantPolygon(edges, t=t, basis=self.basis, xi=self.xi)

    def embed(self, point: Sequence, t=None) -> tuple[Fraction, ...]:
        """Map slice coordinates back to the ambient 3-space."""
        if self.basis is None:
            raise PolygonError("polygon has no recorded ambient basis")
        t = self.sample_level() if t is None else as_fraction(t)
        u, w1, w2 = self.basis
        s1, s2 = (as_fraction(p(t)) if isinstance(p, Affine) else as_fraction(p) for p in point)
        return tuple(t * a + s1 * b + s2 * c for a, b, c in zip(u, w1, w2))

    def corner_dets(self) -> list[int]:
        n = len(self.edges)
        return [det([list(self.edges[i].normal), list(self.edges[(i + 1) % n].normal)]) for i in range(n)]

    def is_delzant(self) -> bool:
        return len(self.edges) >= 3 and all(abs(d) == 1 for d in self.corner_dets())

    def edge_by_carrier(self, label: str) -> Optional[int]:
        for i, e in enumerate(self.edges):
            if label in e.carriers:
                return i
        return None


def _meet(e: PolygonEdge, f: PolygonEdge) -> tuple[Affine, Affine]:
    (a, b), (c, d) = e.normal, f.normal
    D = a * d - b * c
    if D == 0:
        raise PolygonError("adjacent edges are parallel")
    x = (e.offset * d - f.offset * b) / D
    y = (f.offset * a - e.offset * c) / D
    return (x, y)


def polygon_from_halfplanes(
    halfplanes: Sequence[HalfPlane],
    t=None,
    **meta,
) -> DelzantPolygon:
    """Compute the polygon cut out by ``halfplanes`` at level ``t``.

    Identical lines are merged (their carriers united). Lines meeting the
    polygon in a single point are kept in ``degenerate``; the polygon corner
    they pass through is marked critical.
    """
    t = Fraction(0) if t is None else as_fraction(t)
    merged: dict[tuple, HalfPlane] = {}
    for h in halfplanes:
        n = tuple(int(x) for x in h.normal)
        if n == (0, 0):
            raise PolygonError("zero normal")
        g = primitive(n)
        scale = n[0] // g[0] if g[0] else n[1] // g[1]
        off = h.offset(t) / scale
        key = (g, off)
        if key in merged:
            old = merged[key]
            merged[key] = HalfPlane(
                g, old.offset, tuple(sorted(set(old.carriers) | set(h.carriers))), old.excluded or h.excluded
            )
        else:
            merged[key] = HalfPlane(g, h.offset / scale, tuple(sorted(h.carriers)), h.excluded)
    lines = list(merged.values())

    kept, touching = [], []
    for i, h in enumerate(lines):
        seg = _clip_line(h, lines, i, t)
        if seg is None:
            continue
        lo, hi = seg
        if lo is None or hi is None:
            raise PolygonError("unbounded polygon")
        if lo < hi:
            kept.append(h)
        elif lo == hi:
            touching.append(h)
    if len(kept) < 3:
        raise PolygonError("polygon has empty interior")
    order = sort_ccw([h.normal for h in kept])
    by_normal = {h.normal: h for h in kept}
    edges = tuple(PolygonEdge(n, by_normal[n].offset, by_normal[n].carriers, by_normal[n].excluded) for n in order)
    poly = DelzantPolygon(edges, t=t, degenerate=tuple(touching), **meta)
    verts = poly.vertices_at(t)
    marks = set(meta.get("critical_corners", ()))
    for h in touching:
        for vi, p in enumerate(verts):
            if h.normal[0] * p[0] + h.normal[1] * p[1] == h.offset(t):
                marks.add(vi)
    if marks != set(poly.critical_corners):
        object.__setattr__(poly, "critical_corners", tuple(sorted(marks)))
    return poly


def _clip_line(h: HalfPlane, lines: Sequence[HalfPlane], skip: int, t: Fraction):
    """Parameter interval of the line of ``h`` inside all other halfplanes.

    Returns None when empty, otherwise ``(lo, hi)`` with None for infinity.
    """
    n = h.normal
    c = h.offset(t)
    d = (-n[1], n[0])
    nn = n[0] * n[0] + n[1] * n[1]
    p = (Fraction(n[0]) * c / nn, Fraction(n[1]) * c / nn)
    lo = hi = None
    for j, g in enumerate(lines):
        if j == skip:
            continue
        a = g.normal[0] * d[0] + g.normal[1] * d[1]
        b = g.offset(t) - (g.normal[0] * p[0] + g.normal[1] * p[1])
        if a == 0:
            if b > 0:
                return None
            continue
        bound = b / a
        if a > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def segment_lattice_length(p: Sequence, q: Sequence) -> Fraction:
    """Lattice length of the segment from ``p`` to ``q``."""
    diff = [as_fraction(b) - as_fraction(a) for a, b in zip(p, q)]
    if all(x == 0 for x in diff):
        return Fraction(0)
    den = 1
    for x in diff:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in diff]
    prim = primitive(ints)
    i = next(i for i, x in enumerate(prim) if x)
    return diff[i] / prim[i]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)
