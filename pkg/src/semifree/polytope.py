"""Exact H-representation polytopes in dimension 2 and 3.

A polytope is ``{x : <n_i, x> >= c_i}`` where some facets may be flagged
``excluded``; points on an excluded facet do not belong to the set. This is
how open momentum images (windows of a larger manifold) are represented.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .exact_linalg import (
    cross,
    det,
    dot,
    extend_to_basis,
    is_primitive,
    is_unimodular,
    mat_vec,
    primitive,
    rational_solve,
    transpose,
    unimodular_inverse,
)
from .polygon import Affine, DelzantPolygon, HalfPlane, as_fraction, polygon_from_halfplanes

OPEN = "open"
UNBOUNDED = "unbounded"

Point = tuple[Fraction, ...]
End = Union[int, str]


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class HalfSpace:
    """The constraint ``<normal, x> >= offset``."""

    normal: tuple[int, ...]
    offset: Fraction
    excluded: bool = False
    label: Optional[str] = None

    def __post_init__(self):
        n = tuple(int(x) for x in self.normal)
        if not any(n):
            raise PolytopeError("halfspace normal must be nonzero")
        if not is_primitive(n):
            raise PolytopeError(f"halfspace normal {n} is not primitive")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", as_fraction(self.offset))

    def slack(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) - self.offset

    def contains(self, x: Sequence) -> bool:
        s = self.slack(x)
        return s > 0 if self.excluded else s >= 0


@dataclass(frozen=True)
class Vertex:
    point: Point
    facets: frozenset[int]


@dataclass(frozen=True)
class Edge:
    """A 1-dimensional face.

    ``start``/``end`` are vertex indices, or ``OPEN`` when the edge runs into
    an excluded facet, or ``UNBOUNDED``. ``direction`` is primitive and points
    from start to end. Points are None at unbounded ends.
    """

    facets: frozenset[int]
    direction: tuple[int, ...]
    start: End
    end: End
    start_point: Optional[Point]
    end_point: Optional[Point]

    @property
    def closed(self) -> bool:
        return isinstance(self.start, int) and isinstance(self.end, int)

    @property
    def length(self) -> Optional[Fraction]:
        if not self.closed:
            return None
        i = next(i for i, d in enumerate(self.direction) if d)
        return (self.end_point[i] - self.start_point[i]) / self.direction[i]


@dataclass(frozen=True)
class LabeledPolytope:
    dim: int
    halfspaces: tuple[HalfSpace, ...]
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    facets: tuple[int, ...]
    unbounded: tuple[int, ...] = ()

    def label(self, i: int) -> str:
        h = self.halfspaces[i]
        return h.label if h.label is not None else f"h{i}"

    def labels(self, idx: Iterable[int]) -> tuple[str, ...]:
        return tuple(sorted(self.label(i) for i in idx))

    def facet_by_label(self, label: str) -> int:
        for i, h in enumerate(self.halfspaces):
            if self.label(i) == label:
                return i
        raise KeyError(label)

    def vertex_edges(self, v: int) -> list[tuple[int, tuple[int, ...]]]:
        """Edges at vertex ``v`` with their outgoing primitive directions."""
        out = []
        for k, e in enumerate(self.edges):
            if e.start == v:
                out.append((k, e.direction))
            elif e.end == v:
                out.append((k, tuple(-x for x in e.direction)))
        return out

    def contains(self, x: Sequence) -> bool:
        return all(h.contains(x) for h in self.halfspaces)

    def open_edges(self) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.start == OPEN and e.end == OPEN]


@dataclass(frozen=True)
class VertexVerdict:
    vertex: int
    point: Point
    directions: tuple[tuple[int, ...], ...]
    determinant: Optional[int]
    ok: bool


@dataclass(frozen=True)
class DelzantReport:
    vertices: tuple[VertexVerdict, ...]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.vertices)

    def failures(self) -> list[VertexVerdict]:
        return [v for v in self.vertices if not v.ok]


# -- exact LP by basic-solution enumeration --------------------------------


def _bareiss_det(M: list[list[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def _lp_max(obj, ineqs, eqs=()):
    """Maximize ``obj . y`` over ``{a . y >= b for (a,b) in ineqs; a . y = b for eqs}``.

    Enumerates basic solutions; the feasible region must be pointed and the
    objective bounded (callers guarantee both). Returns None when infeasible.
    The constraint rows are integers; right-hand sides are scaled by a common
    denominator so every basic solution is ``num / den`` with integer entries.
    """
    nv = len(obj)
    need = nv - len(eqs)
    rhs = [as_fraction(b) for _, b in ineqs] + [as_fraction(b) for _, b in eqs]
    L = math.lcm(*(b.denominator for b in rhs)) if rhs else 1
    A = [[int(x) for x in a] for a, _ in ineqs]
    B = [int(b * L) for b in rhs[: len(ineqs)]]
    eq_rows = [[int(x) for x in a] for a, _ in eqs]
    eq_rhs = [int(b * L) for b in rhs[len(ineqs):]]
    best_num, best_den = None, 1
    for combo in itertools.combinations(range(len(ineqs)), need):
        rows = eq_rows + [A[i] for i in combo]
        den = _bareiss_det(rows)
        if den == 0:
            continue
        col = eq_rhs + [B[i] for i in combo]
        num = []
        for j in range(nv):
            Mj = [r[:j] + [c] + r[j + 1:] for r, c in zip(rows, col)]
            num.append(_bareiss_det(Mj))
        if den < 0:
            den, num = -den, [-x for x in num]
        if all(sum(a * y for a, y in zip(row, num)) >= b * den for row, b in zip(A, B)):
            val = sum(c * y for c, y in zip(obj, num))
            if best_num is None or val * best_den > best_num * den:
                best_num, best_den = val, den
    if best_num is None:
        return None
    return Fraction(best_num, best_den * L)


def _max_slack(halfspaces: Sequence[HalfSpace], dim: int, on: Optional[int] = None,
               strict_only: bool = False) -> Optional[Fraction]:
    """Largest ``s <= 1`` such that some point has every slack ``>= s``.

    With ``on`` given the point is constrained to that facet plane, and
    constraints sharing the plane are skipped. With ``strict_only`` only
    excluded constraints receive the ``s`` margin.
    """
    ineqs = []
    for j, h in enumerate(halfspaces):
        if on is not None:
            g = halfspaces[on]
            if j == on or (h.normal == g.normal and h.offset == g.offset):
                continue
        margin = -1 if (not strict_only or h.excluded) else 0
        ineqs.append((list(h.normal) + [margin], h.offset))
    ineqs.append(([0] * dim + [-1], Fraction(-1)))
    eqs = []
    if on is not None:
        g = halfspaces[on]
        eqs.append((list(g.normal) + [0], g.offset))
    return _lp_max([0] * dim + [1], ineqs, eqs)


# -- face enumeration ------------------------------------------------------


def from_halfspaces(hs: Sequence[HalfSpace], dim: Optional[int] = None) -> LabeledPolytope:
    """Enumerate vertices, edges and facets of an H-represented polytope."""
    hs = tuple(hs)
    if not hs:
        raise PolytopeError("no halfspaces given")
    if dim is None:
        dim = len(hs[0].normal)
    if dim not in (2, 3):
        raise PolytopeError("only dimensions 2 and 3 are supported")
    if any(len(h.normal) != dim for h in hs):
        raise PolytopeError("halfspace dimension mismatch")
    normals = [list(h.normal) for h in hs]
    if not any(det(list(c)) != 0 for c in itertools.combinations(normals, dim)):
        raise PolytopeError("polytope contains a line (normals do not span)")
    s = _max_slack(hs, dim)
    if s is None or s <= 0:
        raise PolytopeError("constraint set has empty interior")

    vertices = _vertices(hs, dim)
    vindex = {v.point: i for i, v in enumerate(vertices)}
    edges = _edges(hs, dim, vindex)
    facets = []
    for i, h in enumerate(hs):
        if h.excluded:
            continue
        if dim == 2:
            present = any(i in e.facets for e in edges)
        elif _spanned_by_edges(i, edges):
            present = True
        else:
            sl = _max_slack(hs, dim, on=i)
            present = sl is not None and sl > 0
        if present:
            facets.append(i)
    unbounded = tuple(k for k, e in enumerate(edges) if UNBOUNDED in (e.start, e.end))
    return LabeledPolytope(dim, hs, tuple(vertices), tuple(edges), tuple(facets), unbounded)


def _spanned_by_edges(i: int, edges: Sequence[Edge]) -> bool:
    """Two non-parallel edges on the plane of facet ``i`` make it a 2-face."""
    dirs = [e.direction for e in edges if i in e.facets]
    return any(any(cross(a, b)) for a, b in itertools.combinations(dirs, 2))


def _vertices(hs, dim) -> list[Vertex]:
    found: dict[Point, set[int]] = {}
    closed = [i for i, h in enumerate(hs) if not h.excluded]
    for combo in itertools.combinations(closed, dim):
        rows = [list(hs[i].normal) for i in combo]
        if det(rows) == 0:
            continue
        x = rational_solve(rows, [hs[i].offset for i in combo])
        if x is None or not all(h.contains(x) for h in hs):
            continue
        found.setdefault(tuple(x), set()).update(combo)
    out = []
    for p in sorted(found):
        tight = frozenset(i for i in closed if hs[i].slack(p) == 0)
        out.append(Vertex(p, tight))
    return out


def _line_through(hs, pair, dim):
    if dim == 3:
        i, j = pair
        d = cross(hs[i].normal, hs[j].normal)
        if not any(d):
            return None
        d = primitive(d)
        rows = [list(hs[i].normal), list(hs[j].normal), list(d)]
        p = rational_solve(rows, [hs[i].offset, hs[j].offset, 0])
    else:
        (i,) = pair
        n = hs[i].normal
        d = (n[1], -n[0])
        p = rational_solve([list(n), list(d)], [hs[i].offset, 0])
    return tuple(p), d


def _edges(hs, dim, vindex) -> list[Edge]:
    closed = [i for i, h in enumerate(hs) if not h.excluded]
    seen: dict[frozenset, Edge] = {}
    for pair in itertools.combinations(closed, dim - 1):
        line = _line_through(hs, pair, dim)
        if line is None:
            continue
        p, d = line
        lo = hi = None
        lo_open = hi_open = False
        tight = set(pair)
        feasible = True
        for k, h in enumerate(hs):
            if k in pair:
                continue
            a = dot(h.normal, d)
            b = h.offset - dot(h.normal, p)
            if a == 0:
                if b > 0 or (b == 0 and h.excluded):
                    feasible = False
                    break
                if b == 0:
                    tight.add(k)
                continue
            bound = Fraction(b) / a
            if a > 0:
                if lo is None or bound > lo:
                    lo, lo_open = bound, h.excluded
                elif bound == lo:
                    lo_open = lo_open or h.excluded
            else:
                if hi is None or bound < hi:
                    hi, hi_open = bound, h.excluded
                elif bound == hi:
                    hi_open = hi_open or h.excluded
        if not feasible:
            continue
        if lo is not None and hi is not None and lo >= hi:
            continue
        key = frozenset(tight)
        if key in seen:
            continue

        def endpoint(s, is_open):
            if s is None:
                return UNBOUNDED, None
            pt = tuple(a + s * b for a, b in zip(p, d))
            if is_open:
                return OPEN, pt
            if pt not in vindex:
                raise PolytopeError(f"edge endpoint {pt} is not a vertex")
            return vindex[pt], pt

        s0, p0 = endpoint(lo, lo_open)
        s1, p1 = endpoint(hi, hi_open)
        direction = tuple(d)
        if not isinstance(s0, int) and isinstance(s1, int):
            s0, p0, s1, p1 = s1, p1, s0, p0
            direction = tuple(-x for x in d)
        seen[key] = Edge(key, direction, s0, s1, p0, p1)
    return sorted(seen.values(), key=_edge_key)


def _edge_key(e: Edge):
    def k(end, pt):
        return (0 if isinstance(end, int) else 1, pt or ())

    return (k(e.start, e.start_point), e.direction, k(e.end, e.end_point))


# -- Delzant ---------------------------------------------------------------


def check_delzant(P: LabeledPolytope) -> DelzantReport:
    verdicts = []
    for v, vert in enumerate(P.vertices):
        dirs = tuple(d for _, d in P.vertex_edges(v))
        if len(dirs) != P.dim:
            raise PolytopeError(
                f"vertex {vert.point} has {len(dirs)} edges, expected {P.dim} (non-simple polytope)"
            )
        D = det([list(d) for d in dirs])
        verdicts.append(VertexVerdict(v, vert.point, dirs, D, abs(D) == 1))
    return DelzantReport(tuple(verdicts))


def edge_lattice_length(edge: Edge) -> Union[Fraction, str]:
    """Lattice length of a closed edge, ``UNBOUNDED`` for edges with open ends."""
    L = edge.length
    return UNBOUNDED if L is None else L


# -- transforms ------------------------------------------------------------


def apply_unimodular(P: LabeledPolytope, A: Sequence[Sequence[int]]) -> LabeledPolytope:
    """Momentum image after reparametrizing the torus action by ``A``.

    Points move by ``x -> A^T x`` and normals by ``n -> A^{-1} n``, so every
    pairing ``<n, x>`` (and hence incidence and lattice length) is kept.
    """
    if len(A) != P.dim or not is_unimodular(A):
        raise PolytopeError("transform must be a unimodular matrix of the ambient size")
    Ainv = unimodular_inverse(A)
    hs = [HalfSpace(mat_vec(Ainv, h.normal), h.offset, h.excluded, h.label) for h in P.halfspaces]
    return from_halfspaces(hs, P.dim)


def transform_point(x: Sequence, A: Sequence[Sequence[int]]) -> Point:
    return tuple(mat_vec(transpose(A), x))


def transform_circle(xi: Sequence[int], A: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """The circle direction ``xi`` written in the reparametrized torus."""
    return tuple(mat_vec(unimodular_inverse(A), xi))


def facet_halfspaces(P: LabeledPolytope) -> list[HalfSpace]:
    """Halfspaces of the facets actually present (plus all excluded ones)."""
    return [h for i, h in enumerate(P.halfspaces) if i in P.facets or h.excluded]


# -- momentum image and slicing --------------------------------------------


@dataclass(frozen=True)
class MomentumImage:
    lo: Fraction
    hi: Fraction
    lo_attained: bool
    hi_attained: bool

    def contains(self, t) -> bool:
        t = as_fraction(t)
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not self.lo_attained:
            return False
        if t == self.hi and not self.hi_attained:
            return False
        return True


def momentum_image(P: LabeledPolytope, xi: Sequence[int]) -> MomentumImage:
    xi = tuple(xi)
    if P.dim != len(xi):
        raise PolytopeError("circle direction has the wrong dimension")
    closure = [(list(h.normal), h.offset) for h in P.halfspaces]
    hi = _lp_max(list(xi), closure)
    lo = -_lp_max([-x for x in xi], closure)

    def attained(level):
        extra = HalfSpace(xi, level)
        extra_neg = HalfSpace(tuple(-x for x in xi), -level)
        hs = list(P.halfspaces) + [extra, extra_neg]
        s = _max_slack_on(hs, P.dim, len(hs) - 2)
        return s is not None and s > 0

    return MomentumImage(lo, hi, attained(lo), attained(hi))


def _max_slack_on(hs, dim, on):
    """Like ``_max_slack(on=...)`` but only excluded constraints need margin."""
    g = hs[on]
    ineqs = []
    for j, h in enumerate(hs):
        if j == on:
            continue
        margin = -1 if h.excluded else 0
        ineqs.append((list(h.normal) + [margin], h.offset))
    ineqs.append(([0] * dim + [-1], Fraction(-1)))
    return _lp_max([0] * dim + [1], ineqs, [(list(g.normal) + [0], g.offset)])


def slice_halfplanes(P: LabeledPolytope, xi: Sequence[int], basis) -> tuple[list[HalfPlane], list]:
    """Project every halfspace into slice coordinates.

    Returns the genuine halfplanes and the list of level-only constraints
    ``(coefficient, offset, excluded)`` meaning ``0 >= offset - coefficient*t``.
    """
    u, w1, w2 = basis
    planes, level_only = [], []
    for i, h in enumerate(P.halfspaces):
        n2 = (dot(h.normal, w1), dot(h.normal, w2))
        off = Affine(h.offset, -dot(h.normal, u))
        if n2 == (0, 0):
            level_only.append((off, h.excluded, P.label(i)))
            continue
        planes.append(HalfPlane(n2, off, (P.label(i),), h.excluded))
    return planes, level_only


def slice_polygon(
    P: LabeledPolytope,
    xi: Sequence[int],
    t=None,
    interval: Optional[tuple] = None,
    basis=None,
) -> DelzantPolygon:
    """Reduced-space polygon ``P ∩ {<xi,x> = t}`` in a complement basis of ``xi``.

    Give either a rational ``t`` or a regular ``interval=(t0, t1)``; in the
    latter case the edge offsets are affine in ``t``.
    """
    if P.dim != 3:
        raise PolytopeError("slicing needs a 3-dimensional polytope")
    xi = tuple(int(x) for x in xi)
    if not is_primitive(xi):
        raise PolytopeError("circle direction must be primitive")
    basis = tuple(basis) if basis is not None else extend_to_basis(xi)
    img = momentum_image(P, xi)
    planes, level_only = slice_halfplanes(P, xi, basis)

    def concrete(level: Fraction, marks=()):
        if not img.contains(level):
            raise PolytopeError(f"level {level} is outside the momentum image")
        for off, excluded, label in level_only:
            v = off(level)
            if v > 0 or (v == 0 and excluded):
                raise PolytopeError(f"level {level} violates facet {label}")
        return polygon_from_halfplanes(planes, level, basis=basis, xi=xi, critical_corners=marks)

    if interval is None:
        if t is None:
            raise PolytopeError("need a level or an interval")
        t = as_fraction(t)
        poly = concrete(t)
        verts = poly.vertices_at(t)
        marks = set(poly.critical_corners)
        for v in P.vertices:
            if dot(xi, v.point) != t:
                continue
            for k, q in enumerate(verts):
                if poly.embed(q, t) == v.point:
                    marks.add(k)
        if marks != set(poly.critical_corners):
            object.__setattr__(poly, "critical_corners", tuple(sorted(marks)))
        return poly

    t0, t1 = (as_fraction(x) for x in interval)
    if not t0 < t1:
        raise PolytopeError("empty interval")
    for v in P.vertices:
        if t0 < dot(xi, v.point) < t1:
            raise PolytopeError(f"interval ({t0}, {t1}) contains the vertex level {dot(xi, v.point)}")
    samples = [t0 + (t1 - t0) * k / 4 for k in (1, 2, 3)]
    polys = [concrete(s) for s in samples]
    combos = {tuple((e.normal, e.carriers) for e in p.edges) for p in polys}
    if len(combos) != 1:
        raise PolytopeError("slice combinatorics change inside the interval")
    mid = polys[1]
    edges = []
    for e in mid.edges:
        # rebuild the offset as an affine function from one carrier facet
        src = next(h for h in planes if h.carriers[0] in e.carriers and _parallel(h.normal, e.normal))
        scale = src.normal[0] // e.normal[0] if e.normal[0] else src.normal[1] // e.normal[1]
        edges.append(type(e)(e.normal, src.offset / scale, e.carriers, e.excluded))
    return DelzantPolygon(tuple(edges), interval=(t0, t1), basis=basis, xi=xi)


def _parallel(a, b) -> bool:
    return a[0] * b[1] - a[1] * b[0] == 0 and (a[0] * b[0] + a[1] * b[1]) > 0
