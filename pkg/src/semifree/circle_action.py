"""Restricting the torus action of a polytope to a circle subgroup."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact_linalg import dot, is_primitive
from .polytope import LabeledPolytope

POINT = "point"
SPHERE = "sphere"
FOUR_MANIFOLD = "four-manifold"

KIND_DIM = {POINT: 0, SPHERE: 2, FOUR_MANIFOLD: 4}

# Weight triples allowed for a semi-free circle action on a 6-manifold.
ALLOWED_WEIGHTS = frozenset(
    tuple(sorted(w))
    for base in [(1, 1, 1), (1, 1, -1), (0, 1, 1), (0, 1, -1), (0, 0, 1)]
    for w in (base, tuple(-x for x in base))
)


class CircleActionError(ValueError):
    pass


@dataclass(frozen=True)
class CircleRestriction:
    polytope: LabeledPolytope
    xi: tuple[int, ...]

    def __post_init__(self):
        xi = tuple(int(x) for x in self.xi)
        if len(xi) != self.polytope.dim or not is_primitive(xi):
            raise CircleActionError("circle direction must be a primitive vector of the ambient size")
        object.__setattr__(self, "xi", xi)

    def mu(self, x: Sequence) -> Fraction:
        return Fraction(dot(self.xi, x))


@dataclass(frozen=True)
class FixedComponent:
    """A connected component of the fixed set.

    ``carrier`` identifies the face of the polytope: ``("vertex", i)``,
    ``("edge", i)`` or ``("facet", i)``. ``size`` is the symplectic area of a
    fixed sphere (lattice length of its edge) and None otherwise.
    """

    kind: str
    carrier: tuple[str, int]
    level: Fraction
    weights: tuple[int, int, int]
    size: Optional[Fraction] = None
    facets: frozenset = field(default=frozenset(), compare=False)

    @property
    def dim(self) -> int:
        return KIND_DIM[self.kind]

    @property
    def index(self) -> int:
        return sum(1 for w in self.weights if w < 0)

    @property
    def extremal(self) -> bool:
        return not (any(w < 0 for w in self.weights) and any(w > 0 for w in self.weights))

    @property
    def is_minimum(self) -> bool:
        return self.extremal and all(w >= 0 for w in self.weights)

    @property
    def is_maximum(self) -> bool:
        return self.extremal and all(w <= 0 for w in self.weights)


@dataclass(frozen=True)
class SemifreeReport:
    ok: bool
    violators: tuple[int, ...]
    pairings: tuple[int, ...]


def semifree_check(P: LabeledPolytope, xi: Sequence[int]) -> SemifreeReport:
    """Every primitive edge direction must pair with ``xi`` into {-1, 0, 1}."""
    xi = tuple(xi)
    pairings = tuple(dot(xi, e.direction) for e in P.edges)
    bad = tuple(k for k, p in enumerate(pairings) if p not in (-1, 0, 1))
    return SemifreeReport(not bad, bad, pairings)


def vertex_weights(P: LabeledPolytope, xi: Sequence[int], v: int) -> tuple[int, ...]:
    return tuple(sorted(dot(xi, d) for _, d in P.vertex_edges(v)))


def fixed_components(P: LabeledPolytope, xi: Sequence[int]) -> list[FixedComponent]:
    if P.dim != 3:
        raise CircleActionError("fixed components are computed for 3-dimensional polytopes")
    xi = CircleRestriction(P, xi).xi
    rep = semifree_check(P, xi)
    if not rep.ok:
        raise CircleActionError(f"action is not semi-free (edges {list(rep.violators)})")

    comps: list[FixedComponent] = []
    in_face = set()
    # fixed facets: every edge on the facet pairs to zero
    for f in P.facets:
        n = P.halfspaces[f].normal
        if any(n[i] * xi[j] != n[j] * xi[i] for i in range(3) for j in range(3)):
            continue
        verts = [v for v, vert in enumerate(P.vertices) if f in vert.facets]
        if not verts:
            raise CircleActionError(f"fixed facet {P.label(f)} has no vertex")
        ws = {vertex_weights(P, xi, v) for v in verts}
        if len(ws) != 1:
            raise CircleActionError(f"inconsistent weights along fixed facet {P.label(f)}")
        level = Fraction(dot(xi, P.vertices[verts[0]].point))
        comps.append(FixedComponent(FOUR_MANIFOLD, ("facet", f), level, ws.pop(), None, frozenset({f})))
        in_face.update(verts)
    for k, e in enumerate(P.edges):
        if dot(xi, e.direction) != 0:
            continue
        if not e.closed:
            raise CircleActionError(f"fixed edge {k} is not compact")
        if e.start in in_face and e.end in in_face:
            continue
        w0 = vertex_weights(P, xi, e.start)
        w1 = vertex_weights(P, xi, e.end)
        if w0 != w1:
            raise CircleActionError(f"endpoint weights {w0} and {w1} of fixed edge {k} disagree")
        level = Fraction(dot(xi, e.start_point))
        comps.append(FixedComponent(SPHERE, ("edge", k), level, w0, e.length, e.facets))
        in_face.update((e.start, e.end))
    for v, vert in enumerate(P.vertices):
        if v in in_face:
            continue
        w = vertex_weights(P, xi, v)
        comps.append(FixedComponent(POINT, ("vertex", v), Fraction(dot(xi, vert.point)), w, None, vert.facets))
    for c in comps:
        if c.weights not in ALLOWED_WEIGHTS:
            raise CircleActionError(f"weights {c.weights} at {c.carrier} are not semi-free")
    comps.sort(key=lambda c: (c.level, c.kind, c.carrier))
    return comps


def critical_values(P: LabeledPolytope, xi: Sequence[int]) -> list[Fraction]:
    return sorted({c.level for c in fixed_components(P, xi)})


def poincare_polynomial(P: LabeledPolytope, xi: Sequence[int]) -> list[int]:
    """Sum of ``t^(2*index) * P_F(t)`` over fixed components (coefficients by degree)."""
    coeffs = [0] * 7
    for c in fixed_components(P, xi):
        if c.kind == POINT:
            pf = [1]
        elif c.kind == SPHERE:
            pf = [1, 0, 1]
        else:
            f = c.carrier[1]
            b2 = sum(1 for e in P.edges if f in e.facets) - 2
            pf = [1, 0, b2, 0, 1]
        shift = 2 * c.index
        for i, a in enumerate(pf):
            coeffs[shift + i] += a
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs
