"""Class bookkeeping across a critical level of the momentum map.

Below a critical level ``lam`` the reduced spaces form a family of polygons
whose edges are carried by facets of the polytope. Passing ``lam`` an edge
either persists (matched by its carrier facet) or collapses to a point.
Edges collapsing from below come from index-2 isolated fixed points and
their classes form the set ``D``. Edges collapsing from above come from
index-1 isolated fixed points. A fixed sphere at ``lam`` is an edge of the
critical polygon; its preimage below is the edge carried by the facet
spanned by the sphere and its downward weight direction (the set ``D_sph``).

The Euler functionals ``e_minus`` and ``e_plus`` live on H_2 of the critical
slice. ``e_minus`` is the DH slope below, pushed through the blowdown of
``D``; ``e_plus`` is the negated DH slope above, pushed through the blowdown
of the mirror classes. With these signs a fixed sphere of self-intersection
``c`` in the critical slice satisfies ``e_minus(S) + e_plus(S) = c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .circle_action import POINT, SPHERE, FixedComponent, fixed_components
from .exact_linalg import dot, integer_solve
from .polygon import DelzantPolygon, PolygonError, as_fraction
from .polytope import LabeledPolytope, PolytopeError, momentum_image, slice_polygon
from .reduced_space import Class, ReducedSpace, SurfaceLattice, reduced_space

BELOW = "below"
ABOVE = "above"


class WallError(ValueError):
    pass


@dataclass(frozen=True)
class SideData:
    """One regular side of a critical level."""

    side: str
    interval: tuple[Fraction, Fraction]
    space: ReducedSpace
    collapsed: tuple[int, ...]  # edges of zero length at the critical level
    matching: tuple[Optional[int], ...]  # edge -> edge of the critical polygon
    class_map: tuple[tuple[int, ...], ...]  # matrix: side lattice -> critical lattice

    @property
    def polygon(self) -> DelzantPolygon:
        return self.space.polygon

    @property
    def lattice(self) -> SurfaceLattice:
        return self.space.lattice

    @property
    def collapsed_classes(self) -> tuple[Class, ...]:
        return tuple(self.lattice.edge_classes[i] for i in self.collapsed)

    def push(self, x: Sequence[int]) -> Class:
        return tuple(sum(r * c for r, c in zip(row, x)) for row in self.class_map)

    def lift(self, y: Sequence[int]) -> Class:
        """The unique preimage of ``y`` orthogonal to every collapsed class."""
        x0 = integer_solve([list(r) for r in self.class_map], list(y))
        if x0 is None:
            raise WallError("class is not in the image of the blowdown map")
        x = list(x0)
        for E in self.collapsed_classes:
            if self.lattice.pair(E, E) != -1:
                raise WallError("collapsed class is not exceptional")
            c = self.lattice.pair(x0, E)
            x = [a + c * e for a, e in zip(x, E)]
        for E in self.collapsed_classes:
            if self.lattice.pair(x, E) != 0:
                raise WallError("collapsed classes are not pairwise orthogonal; lift is not unique")
        return tuple(x)


@dataclass(frozen=True)
class SphereTrace:
    """A fixed sphere at the critical level and its preimage edge below."""

    component: FixedComponent
    at_edge: int
    below_edge: Optional[int]
    below_class: Optional[Class]


@dataclass(frozen=True)
class WallCrossing:
    level: Fraction
    at: ReducedSpace
    below: Optional[SideData]
    above: Optional[SideData]
    components: tuple[FixedComponent, ...]
    spheres: tuple[SphereTrace, ...]

    @property
    def D(self) -> tuple[Class, ...]:
        return self.below.collapsed_classes if self.below else ()

    @property
    def D_plus(self) -> tuple[Class, ...]:
        return self.above.collapsed_classes if self.above else ()

    @property
    def D_sph(self) -> tuple[Class, ...]:
        return tuple(s.below_class for s in self.spheres if s.below_class is not None)

    def e_minus(self, y: Sequence[int]) -> int:
        if self.below is None:
            raise WallError("no regular interval below the level")
        e = self.below.space.euler_functional()
        return dot(e, self.below.lift(y))

    def e_plus(self, y: Sequence[int]) -> int:
        if self.above is None:
            raise WallError("no regular interval above the level")
        e = self.above.space.euler_functional()
        return -dot(e, self.above.lift(y))

    def isometry_defect(self, side: str, x: Sequence[int], y: Sequence[int]) -> int:
        """``x.y - push(x).push(y)``; zero for classes orthogonal to the collapsed ones."""
        data = self.below if side == BELOW else self.above
        return data.lattice.pair(x, y) - self.at.lattice.pair(data.push(x), data.push(y))


def regular_neighbours(P: LabeledPolytope, xi: Sequence[int], lam) -> tuple[Optional[tuple], Optional[tuple]]:
    """Regular intervals immediately below and above ``lam``."""
    lam = as_fraction(lam)
    img = momentum_image(P, xi)
    levels = sorted({img.lo, img.hi, *(c.level for c in fixed_components(P, xi))})
    i = levels.index(lam) if lam in levels else None
    if i is None:
        raise WallError(f"{lam} is not a critical level")
    below = (levels[i - 1], lam) if i > 0 else None
    above = (lam, levels[i + 1]) if i + 1 < len(levels) else None
    return below, above


def _match(side: DelzantPolygon, at: DelzantPolygon, lam: Fraction):
    lengths = side.lengths()
    collapsed, matching = [], []
    for i, e in enumerate(side.edges):
        if lengths[i](lam) == 0:
            collapsed.append(i)
            matching.append(None)
            continue
        hits = [j for j, f in enumerate(at.edges) if set(e.carriers) & set(f.carriers)]
        if len(hits) != 1:
            raise WallError(f"edge carried by {e.carriers} has {len(hits)} partners at the critical level")
        matching.append(hits[0])
    return tuple(collapsed), tuple(matching)


def _class_map(side: ReducedSpace, at: ReducedSpace, collapsed, matching) -> tuple[tuple[int, ...], ...]:
    src = [list(c) for c in side.lattice.edge_classes]  # rows: edge classes
    rows = []
    for r in range(at.lattice.rank):
        target = [0 if j is None else at.lattice.edge_classes[j][r] for j in matching]
        sol = integer_solve(src, target)
        if sol is None:
            raise WallError("edge correspondence does not descend to a map of lattices")
        rows.append(tuple(sol))
    return tuple(rows)


def _side(P, xi, lam, interval, side, at: ReducedSpace) -> SideData:
    poly = slice_polygon(P, xi, interval=interval)
    space = reduced_space(poly)
    collapsed, matching = _match(poly, at.polygon, lam)
    M = _class_map(space, at, collapsed, matching)
    return SideData(side, interval, space, collapsed, matching, M)


def _sphere_trace(P: LabeledPolytope, xi, comp: FixedComponent, at: DelzantPolygon, below: Optional[SideData]):
    e = P.edges[comp.carrier[1]]
    labels = set(P.labels(e.facets))
    hits = [j for j, f in enumerate(at.edges) if labels <= set(f.carriers)]
    if len(hits) != 1:
        raise WallError(f"fixed sphere on {sorted(labels)} is not an edge of the critical polygon")
    below_edge = below_class = None
    if below is not None:
        down = [d for _, d in P.vertex_edges(e.start) if dot(xi, d) < 0]
        if len(down) != 1:
            raise WallError("fixed sphere needs exactly one downward weight direction")
        (d,) = down
        carrier = None
        for f in e.facets:
            if dot(P.halfspaces[f].normal, d) == 0:
                carrier = P.label(f)
        if carrier is None:
            raise WallError("no facet contains the sphere and its downward direction")
        below_edge = below.polygon.edge_by_carrier(carrier)
        if below_edge is None:
            raise WallError(f"facet {carrier} carries no edge below the level")
        below_class = below.lattice.edge_classes[below_edge]
    return SphereTrace(comp, hits[0], below_edge, below_class)


def cross_level(P: LabeledPolytope, xi: Sequence[int], lam) -> WallCrossing:
    lam = as_fraction(lam)
    xi = tuple(xi)
    comps = tuple(c for c in fixed_components(P, xi) if c.level == lam)
    if not comps:
        raise WallError(f"{lam} is not a critical level")
    try:
        at_poly = slice_polygon(P, xi, lam)
    except (PolytopeError, PolygonError) as exc:
        raise WallError(f"no critical slice at {lam}: {exc}") from exc
    at = reduced_space(at_poly)
    lo, hi = regular_neighbours(P, xi, lam)
    below = _side(P, xi, lam, lo, BELOW, at) if lo else None
    above = _side(P, xi, lam, hi, ABOVE, at) if hi else None

    n_down = sum(1 for c in comps if c.kind == POINT and c.index == 2)
    n_up = sum(1 for c in comps if c.kind == POINT and c.index == 1)
    if below is not None and len(below.collapsed) != n_down:
        raise WallError(f"{len(below.collapsed)} edges collapse from below but {n_down} index-2 points sit at the level")
    if above is not None and len(above.collapsed) != n_up:
        raise WallError(f"{len(above.collapsed)} edges collapse from above but {n_up} index-1 points sit at the level")
    spheres = tuple(
        _sphere_trace(P, xi, c, at_poly, below) for c in comps if c.kind == SPHERE
    )
    return WallCrossing(lam, at, below, above, comps, spheres)


@dataclass(frozen=True)
class EulerPair:
    level: Fraction
    lattice: SurfaceLattice
    e_minus: Optional[tuple[int, ...]]
    e_plus: Optional[tuple[int, ...]]


def euler_minus_plus(P: LabeledPolytope, xi: Sequence[int], lam) -> EulerPair:
    """Both Euler functionals on the basis of H_2 of the critical slice."""
    w = cross_level(P, xi, lam)
    basis = [tuple(1 if i == j else 0 for j in range(w.at.lattice.rank)) for i in range(w.at.lattice.rank)]
    em = tuple(w.e_minus(b) for b in basis) if w.below else None
    ep = tuple(w.e_plus(b) for b in basis) if w.above else None
    return EulerPair(w.level, w.at.lattice, em, ep)

