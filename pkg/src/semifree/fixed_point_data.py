"""Fixed point data of a semi-free circle action and its comparison.

The data is recorded level by level. Every invariant kept here is
independent of the basis chosen for the polytope lattice, so two encodings
related by a unimodular change of coordinates give identical records.

The comparators certify necessary combinatorial conditions only. Whether an
intertwining symplectomorphism of reduced spaces exists is not decided; a
positive verdict reads "combinatorially-same".
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .circle_action import FOUR_MANIFOLD, KIND_DIM, POINT, SPHERE, FixedComponent, fixed_components
from .exact_linalg import mat_vec, rational_solve, unimodular_inverse
from .exceptional import Cp2Chart, ExceptionalError, reduce_form
from .morse_wall import WallCrossing, cross_level, regular_neighbours
from .polygon import as_fraction
from .polytope import LabeledPolytope, slice_polygon
from .reduced_space import S2XS2, ReducedSpace, reduced_space

FULL = "full"
SMALL = "small"
STAR_SMALL = "star-small"
MODES = (STAR_SMALL, SMALL, FULL)

SAME = "combinatorially-same"
DIFFERENT = "different"


class FpdError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ComponentRecord:
    """Basis-free invariants of one fixed component."""

    dim: int
    index: int
    weights: tuple[int, ...]
    size: Optional[Fraction] = None
    self_intersection: Optional[int] = None
    e_minus: Optional[int] = None
    e_plus: Optional[int] = None
    normal_degrees: Optional[tuple[int, int]] = None

    @property
    def kind(self) -> str:
        return {0: POINT, 2: SPHERE, 4: FOUR_MANIFOLD}[self.dim]

    @property
    def extremal(self) -> bool:
        return not (any(w < 0 for w in self.weights) and any(w > 0 for w in self.weights))


@dataclass(frozen=True)
class EulerInvariants:
    """A degree-2 cohomology class read through its Poincare dual ``c``:
    ``c.c``, ``K.c`` and the area of ``c``."""

    square: int
    canonical: int
    area: Fraction


@dataclass(frozen=True)
class SurfaceInvariants:
    """Invariants of a reduced space or of an extremal fixed surface."""

    diffeo_type: str
    form: tuple[Fraction, ...]  # reduced form vector (alpha; delta) or sorted (B, F) areas
    euler: Optional[EulerInvariants] = None


@dataclass(frozen=True)
class LevelData:
    level: Fraction
    components: tuple[ComponentRecord, ...]
    extremal: bool
    critical_slice: Optional[SurfaceInvariants] = None  # form + e_minus at a non-extremal level
    extremal_surface: Optional[SurfaceInvariants] = None  # fixed 4-manifold, if any

    @property
    def extremal_dim(self) -> Optional[int]:
        return max((c.dim for c in self.components), default=None) if self.extremal else None


@dataclass(frozen=True)
class FixedPointData:
    levels: tuple[LevelData, ...]
    name: str = ""

    @property
    def critical_values(self) -> tuple[Fraction, ...]:
        return tuple(l.level for l in self.levels)

    def at(self, level) -> LevelData:
        level = as_fraction(level)
        for l in self.levels:
            if l.level == level:
                return l
        raise KeyError(level)


# -- invariants -------------------------------------------------------------


def _pd(space: ReducedSpace, functional: Sequence[int]) -> tuple[int, ...]:
    Q = [list(r) for r in space.lattice.form]
    return tuple(mat_vec(unimodular_inverse(Q), functional))


def euler_invariants(space: ReducedSpace, functional: Sequence[int], t) -> EulerInvariants:
    lat = space.lattice
    c = _pd(space, functional)
    return EulerInvariants(lat.pair(c, c), lat.pair(lat.canonical, c), space.area(c)(as_fraction(t)))


def surface_invariants(space: ReducedSpace, t, euler: Optional[Sequence[int]] = None) -> SurfaceInvariants:
    lat = space.lattice
    t = as_fraction(t)
    if lat.model == S2XS2 and lat.k == 0:
        form = tuple(sorted(f(t) for f in space.form_functional()))
    else:
        v = Cp2Chart(space).form_vector(t)
        try:
            v = reduce_form(v).form
        except ExceptionalError:
            pass
        form = (v.alpha,) + v.deltas
    eu = euler_invariants(space, euler, t) if euler is not None else None
    return SurfaceInvariants(lat.diffeo_type, form, eu)


def sphere_normal_degrees(P: LabeledPolytope, comp: FixedComponent) -> tuple[int, int]:
    """Degrees of the two normal line bundles of a fixed sphere.

    For the edge in facets ``a, b`` with third facets ``c, d`` at its
    endpoints, ``n_c + n_d + (D_a.S) n_a + (D_b.S) n_b = 0``.
    """
    e = P.edges[comp.carrier[1]]
    a, b = sorted(e.facets)
    thirds = []
    for v in (e.start, e.end):
        (c,) = set(P.vertices[v].facets) - {a, b}
        thirds.append(c)
    n = lambda i: P.halfspaces[i].normal  # noqa: E731
    rhs = [-(x + y) for x, y in zip(n(thirds[0]), n(thirds[1]))]
    A = [[n(a)[r], n(b)[r]] for r in range(3)]
    sol = rational_solve(A, rhs)
    if sol is None or any(s.denominator != 1 for s in sol):
        raise FpdError("normal bundle relation has no integral solution")
    return tuple(sorted(int(s) for s in sol))


def _facet_space(P: LabeledPolytope, xi, comp: FixedComponent) -> tuple[ReducedSpace, tuple]:
    lo, hi = regular_neighbours(P, xi, comp.level)
    interval = hi if comp.is_minimum else lo
    return reduced_space(slice_polygon(P, xi, interval=interval)), interval


def extract_fpd(P: LabeledPolytope, xi: Sequence[int], name: str = "") -> FixedPointData:
    xi = tuple(xi)
    comps = fixed_components(P, xi)
    by_level: dict[Fraction, list[FixedComponent]] = {}
    for c in comps:
        by_level.setdefault(c.level, []).append(c)
    levels = []
    for lam in sorted(by_level):
        here = by_level[lam]
        extremal = all(c.extremal for c in here)
        wall: Optional[WallCrossing] = None
        if not extremal:
            wall = cross_level(P, xi, lam)
        records = []
        ext_surface = None
        for c in here:
            size = c.size
            si = cm = cp = nd = None
            if c.kind == SPHERE and not c.extremal:
                trace = next(s for s in wall.spheres if s.component == c)
                S = wall.at.lattice.edge_classes[trace.at_edge]
                si = wall.at.lattice.pair(S, S)
                cm = wall.e_minus(S) if wall.below else None
                cp = wall.e_plus(S) if wall.above else None
            elif c.kind == SPHERE:
                nd = sphere_normal_degrees(P, c)
            elif c.kind == FOUR_MANIFOLD:
                space, _ = _facet_space(P, xi, c)
                sign = 1 if c.is_minimum else -1
                euler = tuple(sign * x for x in space.euler_functional())
                ext_surface = surface_invariants(space, lam, euler)
            records.append(ComponentRecord(c.dim, c.index, c.weights, size, si, cm, cp, nd))
        crit = None
        if wall is not None and wall.below is not None:
            em = [wall.e_minus(tuple(1 if i == j else 0 for j in range(wall.at.lattice.rank)))
                  for i in range(wall.at.lattice.rank)]
            crit = surface_invariants(wall.at, lam, em)
        levels.append(LevelData(lam, tuple(sorted(records)), extremal, crit, ext_surface))
    return FixedPointData(tuple(levels), name)


def merge_germs(lower: FixedPointData, upper: FixedPointData, cut: tuple, name: str = "") -> FixedPointData:
    """Fixed point data of a space glued from a piece below ``cut[1]`` and a
    piece above ``cut[0]``; the overlap ``(cut[0], cut[1])`` must be regular."""
    lo, hi = (as_fraction(x) for x in cut)
    for d in (lower, upper):
        if any(lo < l.level < hi for l in d.levels):
            raise FpdError("the overlap of the two pieces contains a critical level")
    levels = [l for l in lower.levels if l.level <= lo] + [l for l in upper.levels if l.level >= hi]
    return FixedPointData(tuple(levels), name)


# -- comparison ------------------------------------------------------------


@dataclass(frozen=True)
class LevelVerdict:
    level: Optional[Fraction]
    ok: bool
    reasons: tuple[str, ...] = ()


@dataclass(frozen=True)
class FpdComparisonReport:
    mode: str
    levels: tuple[LevelVerdict, ...]

    @property
    def same(self) -> bool:
        return all(v.ok for v in self.levels)

    @property
    def verdict(self) -> str:
        return SAME if self.same else DIFFERENT

    @property
    def reasons(self) -> tuple[str, ...]:
        return tuple(sorted({r for v in self.levels for r in v.reasons}))


def _multiset(items) -> Counter:
    return Counter(items)


def _level_reasons(a: LevelData, b: LevelData, mode: str) -> list[str]:
    reasons = []
    if a.extremal != b.extremal:
        reasons.append("extremal-mismatch")
        return reasons
    if a.extremal:
        if a.extremal_dim != b.extremal_dim:
            reasons.append("extremal-dimension")
        if mode == STAR_SMALL:
            return reasons
    key_star = lambda c: (c.dim, c.index)  # noqa: E731
    if _multiset(map(key_star, a.components)) != _multiset(map(key_star, b.components)):
        reasons.append("index")
        return reasons
    if mode == STAR_SMALL:
        return reasons
    if _multiset((c.dim, c.index, c.size) for c in a.components) != _multiset(
        (c.dim, c.index, c.size) for c in b.components
    ):
        reasons.append("size")
    if _multiset((c.dim, c.index, c.self_intersection) for c in a.components) != _multiset(
        (c.dim, c.index, c.self_intersection) for c in b.components
    ):
        reasons.append("self-intersection")
    sa, sb = a.extremal_surface, b.extremal_surface
    if (sa is None) != (sb is None) or (sa and (sa.diffeo_type, sa.form) != (sb.diffeo_type, sb.form)):
        reasons.append("extremal-form")
    if mode == SMALL:
        return reasons
    if _multiset((c.dim, c.index, c.e_minus, c.normal_degrees) for c in a.components) != _multiset(
        (c.dim, c.index, c.e_minus, c.normal_degrees) for c in b.components
    ):
        reasons.append("e-minus")
    ca, cb = a.critical_slice, b.critical_slice
    if ca != cb:
        reasons.append("e-minus-class")
    if (sa and sa.euler) != (sb and sb.euler):
        reasons.append("extremal-euler")
    return reasons


def compare_fpd(d1: FixedPointData, d2: FixedPointData, mode: str = FULL) -> FpdComparisonReport:
    if mode not in MODES:
        raise FpdError(f"unknown comparison mode {mode!r}")
    if d1.critical_values != d2.critical_values:
        only = sorted(set(d1.critical_values) ^ set(d2.critical_values))
        verdicts = [LevelVerdict(l, False, ("level",)) for l in only]
        return FpdComparisonReport(mode, tuple(verdicts))
    verdicts = []
    for a, b in zip(d1.levels, d2.levels):
        r = _level_reasons(a, b, mode)
        verdicts.append(LevelVerdict(a.level, not r, tuple(r)))
    return FpdComparisonReport(mode, tuple(verdicts))


# -- monotone constraints ---------------------------------------------------


@dataclass(frozen=True)
class MonotoneReport:
    ok: bool
    failures: tuple[tuple[str, Optional[Fraction]], ...]

    @property
    def reasons(self) -> tuple[str, ...]:
        return tuple(sorted({r for r, _ in self.failures}))


def monotone_check(d: FixedPointData) -> MonotoneReport:
    """Constraints on a monotone semi-free action normalized so ``[omega] = c_1``.

    * an isolated fixed point sits at minus the sum of its weights;
    * non-extremal isolated points sit at level -1 or 1;
    * non-extremal fixed surfaces sit at level 0, all with the same index;
    * at most two critical values are positive.
    """
    fails: list[tuple[str, Optional[Fraction]]] = []
    surface_indices = set()
    for l in d.levels:
        for c in l.components:
            if c.dim == 0 and l.level != -sum(c.weights):
                fails.append(("weight-sum", l.level))
            if c.extremal:
                continue
            if c.dim == 0 and l.level not in (-1, 1):
                fails.append(("isolated-level", l.level))
            if c.dim == 2:
                if l.level != 0:
                    fails.append(("surface-level", l.level))
                surface_indices.add(c.index)
    if len(surface_indices) > 1:
        fails.append(("surface-index", None))
    if sum(1 for l in d.levels if l.level > 0) > 2:
        fails.append(("too-many-positive-levels", None))
    unique = tuple(dict.fromkeys(fails))
    return MonotoneReport(not unique, unique)


# -- the normal bundle rule -------------------------------------------------


@dataclass(frozen=True)
class NormalBundleReport:
    c_minus: int
    c_plus: int
    c: int

    @property
    def ok(self) -> bool:
        return self.c_minus + self.c_plus == self.c


def normal_bundle_rule(c_minus: int, c_plus: int, c: int) -> NormalBundleReport:
    return NormalBundleReport(c_minus, c_plus, c)


def normal_bundle_consistency(component: FixedComponent, wall: WallCrossing) -> NormalBundleReport:
    """``c_minus + c_plus = c`` for a non-extremal fixed sphere at the wall level."""
    if component.kind != SPHERE or component.extremal:
        raise FpdError("the rule applies to non-extremal fixed spheres")
    if component.level != wall.level:
        raise FpdError("component does not sit at the wall level")
    trace = next((s for s in wall.spheres if s.component == component), None)
    if trace is None:
        raise FpdError("sphere is not traced by the wall crossing")
    S = wall.at.lattice.edge_classes[trace.at_edge]
    return NormalBundleReport(wall.e_minus(S), wall.e_plus(S), wall.at.lattice.pair(S, S))


def all_normal_bundle_checks(P: LabeledPolytope, xi: Sequence[int]) -> list[tuple[FixedComponent, NormalBundleReport]]:
    out = []
    walls: dict[Fraction, WallCrossing] = {}
    for c in fixed_components(P, xi):
        if c.kind == SPHERE and not c.extremal:
            w = walls.get(c.level) or walls.setdefault(c.level, cross_level(P, xi, c.level))
            out.append((c, normal_bundle_consistency(c, w)))
    return out


# -- synthetic data ---------------------------------------------------------


def synthetic_fpd(entries: Sequence[tuple], name: str = "") -> FixedPointData:
    """Build data from ``(level, dim, weights)`` triples (no slice invariants)."""
    by_level: dict[Fraction, list[ComponentRecord]] = {}
    for level, dim, weights in entries:
        w = tuple(sorted(weights))
        rec = ComponentRecord(dim, sum(1 for x in w if x < 0), w)
        by_level.setdefault(as_fraction(level), []).append(rec)
    levels = tuple(
        LevelData(l, tuple(sorted(cs)), all(c.extremal for c in cs)) for l, cs in sorted(by_level.items())
    )
    return FixedPointData(levels, name)


def fpd_from_components(comps: Sequence[FixedComponent]) -> FixedPointData:
    return synthetic_fpd([(c.level, KIND_DIM[c.kind], c.weights) for c in comps])
