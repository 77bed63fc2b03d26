"""Reduced spaces as Delzant polygons and their second homology.

Conventions. Edge normals point inward. For an edge with normal ``u`` between
edges with normals ``u_prev`` and ``u_next`` the divisor self-intersection
``a`` satisfies ``u_prev + u_next = -a * u``; every edge of the standard
triangle has ``a = +1`` and a blown-down corner has ``a = -1``.

Classes are coefficient vectors in the basis of a :class:`SurfaceLattice`:
``(L, E1, ..., Ek)`` for blowups of the projective plane, ``(B, F, E1, ...)``
for blowups of the product of two spheres.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact_linalg import (
    det,
    dot,
    integer_solve,
    is_unimodular,
    mat_vec,
    rational_solve,
    transpose,
    unimodular_inverse,
)
from .polygon import Affine, DelzantPolygon, PolygonError, Quadratic, as_fraction
from .polytope import LabeledPolytope, slice_polygon

CP2 = "CP2"
S2XS2 = "S2xS2"

Class = tuple[int, ...]


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceLattice:
    """H_2 of a rational surface with a standard basis and edge labels."""

    model: str
    k: int
    edge_classes: tuple[Class, ...] = ()

    @property
    def rank(self) -> int:
        return (1 if self.model == CP2 else 2) + self.k

    @property
    def basis(self) -> tuple[str, ...]:
        head = ("L",) if self.model == CP2 else ("B", "F")
        return head + tuple(f"E{i}" for i in range(1, self.k + 1))

    @property
    def form(self) -> tuple[tuple[int, ...], ...]:
        r = self.rank
        Q = [[0] * r for _ in range(r)]
        if self.model == CP2:
            Q[0][0] = 1
            start = 1
        else:
            Q[0][1] = Q[1][0] = 1
            start = 2
        for i in range(start, r):
            Q[i][i] = -1
        return tuple(tuple(row) for row in Q)

    @property
    def canonical(self) -> Class:
        if self.model == CP2:
            return (-3,) + (1,) * self.k
        return (-2, -2) + (1,) * self.k

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        Q = self.form
        return dot(x, mat_vec(Q, y))

    def unit(self, name: str) -> Class:
        i = self.basis.index(name)
        return tuple(1 if j == i else 0 for j in range(self.rank))

    @property
    def diffeo_type(self) -> str:
        if self.model == CP2:
            return "CP2" if self.k == 0 else f"CP2#{self.k}"
        return "S2xS2" if self.k == 0 else f"S2xS2#{self.k}"

    @property
    def rigid_per_catalog(self) -> bool:
        """Catalogued rigid types: the product of spheres and CP2#k for k <= 4."""
        return (self.model == S2XS2 and self.k == 0) or (self.model == CP2 and self.k <= 4)

    def format_class(self, x: Sequence[int]) -> str:
        return format_class(x, self.basis)


def format_class(x: Sequence[int], basis: Sequence[str]) -> str:
    parts = []
    for c, name in zip(x, basis):
        if c == 0:
            continue
        coef = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{coef}{name}"))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        s += f"{sign}{term}"
    return s


@dataclass(frozen=True)
class BlowdownStep:
    edge: int
    exceptional: str


# -- fan arithmetic ---------------------------------------------------------


def _self_int(normals: Sequence[tuple[int, int]], i: int) -> int:
    n = len(normals)
    u = normals[i]
    w = (normals[i - 1][0] + normals[(i + 1) % n][0], normals[i - 1][1] + normals[(i + 1) % n][1])
    # w must be a multiple of u
    if w[0] * u[1] - w[1] * u[0] != 0:
        raise LatticeError("fan relation fails: neighbours do not sum to a multiple of the edge normal")
    if u[0]:
        q = Fraction(w[0], u[0])
    else:
        q = Fraction(w[1], u[1])
    if q.denominator != 1:
        raise LatticeError("fan relation has a non-integral coefficient")
    return -int(q)


def self_intersection(Q: DelzantPolygon, edge: int) -> int:
    if not Q.edges[edge].excluded and len(Q.edges) >= 3:
        return _self_int([e.normal for e in Q.edges], edge)
    raise LatticeError("self-intersection needs a compact edge")


def edge_intersection_matrix(Q: DelzantPolygon) -> list[list[int]]:
    """Intersection numbers of edge divisors read off the fan."""
    n = len(Q.edges)
    normals = [e.normal for e in Q.edges]
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        M[i][i] = _self_int(normals, i)
        j = (i + 1) % n
        if j != i:
            M[i][j] += 1
            M[j][i] += 1
    return M


def _check_delzant(normals) -> None:
    n = len(normals)
    if n < 3:
        raise LatticeError("polygon needs at least three edges")
    for i in range(n):
        if abs(det([list(normals[i]), list(normals[(i + 1) % n])])) != 1:
            raise LatticeError(f"corner {i} is not Delzant")


def polygon_normalize(Q: Union[DelzantPolygon, Sequence[tuple[int, int]]]) -> tuple[SurfaceLattice, list[BlowdownStep]]:
    """Blow down (-1)-edges until a triangle or a Hirzebruch quadrilateral remains."""
    if isinstance(Q, DelzantPolygon):
        if not Q.compact:
            raise LatticeError("cannot normalize a non-compact polygon")
        normals = [e.normal for e in Q.edges]
    else:
        normals = [tuple(n) for n in Q]
    _check_delzant(normals)

    live = list(range(len(normals)))
    history: list[tuple[list[int], int]] = []
    while True:
        cur = [normals[i] for i in live]
        if len(cur) == 3:
            break
        minus = [p for p in range(len(cur)) if _self_int(cur, p) == -1]
        if not minus:
            if len(cur) == 4:
                break
            raise LatticeError("no contractible edge; the slice is not a rational surface")
        p = min(minus, key=lambda q: cur[q])
        history.append((list(live), p))
        live.pop(p)

    cur = [normals[i] for i in live]
    odd_extra = 0
    classes: dict[int, list] = {}
    if len(cur) == 3:
        model = CP2
        for i in live:
            classes[i] = {"L": 1}
    else:
        selfs = [_self_int(cur, p) for p in range(4)]
        zeros = [p for p in range(4) if selfs[p] == 0]
        fib = zeros[0]
        if selfs[(fib + 2) % 4] != 0:
            raise LatticeError("unexpected quadrilateral")
        s_a, s_b = (fib + 1) % 4, (fib + 3) % 4
        if selfs[s_a] > selfs[s_b]:
            s_a, s_b = s_b, s_a
        kk = -selfs[s_a]
        fibers = (live[fib], live[(fib + 2) % 4])
        if kk % 2 == 0:
            model = S2XS2
            h = kk // 2
            for i in fibers:
                classes[i] = {"F": 1}
            classes[live[s_a]] = {"B": 1, "F": -h}
            classes[live[s_b]] = {"B": 1, "F": h}
        else:
            model = CP2
            odd_extra = 1
            h = (kk + 1) // 2
            for i in fibers:
                classes[i] = {"L": 1, "Et": -1}
            classes[live[s_a]] = {"L": 1 - h, "Et": h}
            classes[live[s_b]] = {"L": h, "Et": 1 - h}

    steps = []
    for j, (before, p) in reversed(list(enumerate(history))):
        name = f"X{j}"
        e = before[p]
        classes[e] = {name: 1}
        for q in (before[p - 1], before[(p + 1) % len(before)]):
            c = dict(classes[q])
            c[name] = c.get(name, 0) - 1
            classes[q] = c
    for j, (before, p) in enumerate(history):
        steps.append(BlowdownStep(before[p], f"E{j + 1}"))

    k = len(history) + odd_extra
    names = {f"X{j}": f"E{j + 1}" for j in range(len(history))}
    names["Et"] = f"E{len(history) + 1}"
    lat = SurfaceLattice(model, k)
    order = lat.basis
    edge_classes = []
    for i in range(len(normals)):
        vec = [0] * lat.rank
        for key, c in classes[i].items():
            vec[order.index(names.get(key, key))] += c
        edge_classes.append(tuple(vec))
    lat = SurfaceLattice(model, k, tuple(edge_classes))
    if model == S2XS2 and k > 0:
        # a blown-up product of spheres is CP2#(k+1); report it in that model
        # so the normal form does not depend on the order of blowdowns
        bc = s2s2_basis_change(SurfaceLattice(CP2, k + 1))
        lat = SurfaceLattice(CP2, k + 1, tuple(bc.unapply(c) for c in edge_classes))
        rename = {"E1": "L-E1-E2", **{f"E{j}": f"E{j + 1}" for j in range(2, k + 1)}}
        steps = [BlowdownStep(s.edge, rename[s.exceptional]) for s in steps]
    _verify_lattice(lat, normals)
    return lat, steps


def _verify_lattice(lat: SurfaceLattice, normals) -> None:
    n = len(normals)
    for i in range(n):
        for j in range(n):
            if i == j:
                want = _self_int(normals, i)
            else:
                want = 1 if (i - j) % n in (1, n - 1) else 0
            if lat.pair(lat.edge_classes[i], lat.edge_classes[j]) != want:
                raise LatticeError("normalized classes do not reproduce the fan intersection form")
    K = tuple(-sum(c[r] for c in lat.edge_classes) for r in range(lat.rank))
    if K != lat.canonical:
        raise LatticeError("sum of edge classes is not minus the canonical class")


def edge_class_matrix(lat: SurfaceLattice) -> list[list[int]]:
    """Columns are the edge classes."""
    return transpose([list(c) for c in lat.edge_classes])


def edge_expansion(lat: SurfaceLattice, x: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Integer combination of edge divisors representing ``x`` (None if impossible)."""
    return integer_solve(edge_class_matrix(lat), list(x))


# -- area profiles ----------------------------------------------------------


@dataclass(frozen=True)
class AreaProfile:
    cls: Class
    area: Affine
    interval: Optional[tuple[Fraction, Fraction]]

    @property
    def slope(self) -> int:
        b = self.area.b
        if b.denominator != 1:
            raise LatticeError("non-integral Euler class evaluation")
        return int(b)


@dataclass(frozen=True)
class ReducedSpace:
    """A slice polygon together with its normalized lattice."""

    polygon: DelzantPolygon
    lattice: SurfaceLattice
    steps: tuple[BlowdownStep, ...] = ()
    _form: tuple = field(default=(), compare=False, repr=False)

    def form_functional(self) -> tuple[Affine, ...]:
        """Values of the reduced symplectic class on the basis (affine in t)."""
        if not self._form:
            object.__setattr__(self, "_form", _functional(self.lattice, self.polygon.lengths()))
        return self._form

    def euler_functional(self) -> tuple[int, ...]:
        out = []
        for f in self.form_functional():
            if f.b.denominator != 1:
                raise LatticeError("Euler class is not integral")
            out.append(int(f.b))
        return tuple(out)

    def area(self, x: Sequence[int]) -> Affine:
        return sum((c * f for c, f in zip(x, self.form_functional())), Affine())

    def edge_class(self, i: int) -> Class:
        return self.lattice.edge_classes[i]


def _functional(lat: SurfaceLattice, values: Sequence[Affine]) -> tuple[Affine, ...]:
    A = [list(c) for c in lat.edge_classes]
    a = rational_solve(A, [v.a for v in values])
    b = rational_solve(A, [v.b for v in values])
    if a is None or b is None:
        raise LatticeError("edge data is inconsistent with the lattice relations")
    return tuple(Affine(x, y) for x, y in zip(a, b))


def reduced_space(Q: DelzantPolygon) -> ReducedSpace:
    lat, steps = polygon_normalize(Q)
    return ReducedSpace(Q, lat, tuple(steps))


def area_profile(Q: Union[DelzantPolygon, ReducedSpace], what) -> AreaProfile:
    """Area of an edge (``int``) or a class (coefficient tuple) as a function of t."""
    R = Q if isinstance(Q, ReducedSpace) else reduced_space(Q)
    if isinstance(what, int):
        cls = R.edge_class(what)
        area = R.polygon.lengths()[what]
    else:
        cls = tuple(what)
        if edge_expansion(R.lattice, cls) is None:
            raise LatticeError("class is not in the span of the edge classes")
        area = R.area(cls)
    return AreaProfile(cls, area, R.polygon.interval)


def euler_class_eval(Q: Union[DelzantPolygon, ReducedSpace], what) -> int:
    prof = area_profile(Q, what)
    R = Q if isinstance(Q, ReducedSpace) else None
    poly = R.polygon if R else Q
    if poly.interval is not None:
        lo, hi = poly.interval
        t1, t2 = lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3
        if (prof.area(t2) - prof.area(t1)) / (t2 - t1) != prof.area.b:
            raise LatticeError("area is not affine on the interval")
    return prof.slope


# -- volume -----------------------------------------------------------------


@dataclass(frozen=True)
class VolumePiece:
    interval: tuple[Fraction, Fraction]
    area: Quadratic


@dataclass(frozen=True)
class VolumeProfile:
    pieces: tuple[VolumePiece, ...]
    critical: tuple[tuple[Fraction, Fraction], ...]  # (level, area of the critical slice)

    def one_sided_continuous(self) -> bool:
        for lam, val in self.critical:
            for p in self.pieces:
                lo, hi = p.interval
                if lam in (lo, hi) and p.area(lam) != val:
                    return False
        return True


def reduced_volume_profile(P: LabeledPolytope, xi: Sequence[int], interval: tuple) -> VolumeProfile:
    """Piecewise-quadratic reduced volume on ``interval`` split at critical levels."""
    from .circle_action import critical_values

    lo, hi = (as_fraction(x) for x in interval)
    crit = [c for c in critical_values(P, xi) if lo <= c <= hi]
    cuts = sorted({lo, hi, *crit})
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        Q = slice_polygon(P, xi, interval=(a, b))
        pieces.append(VolumePiece((a, b), Q.area()))
    critical = []
    for c in crit:
        try:
            Qc = slice_polygon(P, xi, c)
        except PolygonError:
            val = Fraction(0)
        else:
            val = Qc.area()(c)
        critical.append((c, val))
    return VolumeProfile(tuple(pieces), tuple(critical))


# -- basis change between the two models ------------------------------------


@dataclass(frozen=True)
class BasisChange:
    source: SurfaceLattice
    target: SurfaceLattice
    matrix: tuple[tuple[int, ...], ...]  # columns: images of source basis vectors
    inverse: tuple[tuple[int, ...], ...]

    def apply(self, x: Sequence[int]) -> Class:
        return tuple(mat_vec(self.matrix, x))

    def unapply(self, y: Sequence[int]) -> Class:
        return tuple(mat_vec(self.inverse, y))


def s2s2_basis_change(lat: SurfaceLattice) -> BasisChange:
    """Rewrite H_2 of CP2#k (k >= 2) in the basis ``B, F, E~1, ..., E~(k-1)``.

    ``B = L - E1``, ``F = L - E2``, ``E~1 = L - E1 - E2`` and ``E~j = E(j+1)``.
    """
    if lat.model != CP2 or lat.k < 2:
        raise LatticeError("need CP2#k with k >= 2")
    k = lat.k
    r = k + 1
    # rows: new basis vectors written in the old basis (L, E1, ..., Ek)
    new_in_old = []
    B = [1, -1, 0] + [0] * (k - 2)
    F = [1, 0, -1] + [0] * (k - 2)
    E1 = [1, -1, -1] + [0] * (k - 2)
    new_in_old += [B, F, E1]
    for j in range(3, r):
        v = [0] * r
        v[j] = 1
        new_in_old.append(v)
    P = transpose(new_in_old)  # columns = new basis in old coordinates
    if not is_unimodular(P):
        raise LatticeError("basis change is not unimodular")
    Pinv = unimodular_inverse(P)
    edge_classes = tuple(tuple(mat_vec(Pinv, c)) for c in lat.edge_classes)
    target = SurfaceLattice(S2XS2, k - 1, edge_classes)
    # isometry check on the basis
    for i in range(r):
        for j in range(r):
            ei = [1 if a == i else 0 for a in range(r)]
            ej = [1 if a == j else 0 for a in range(r)]
            if lat.pair(ei, ej) != target.pair(mat_vec(Pinv, ei), mat_vec(Pinv, ej)):
                raise LatticeError("basis change is not an isometry")
    return BasisChange(
        lat, target, tuple(tuple(r_) for r_ in Pinv), tuple(tuple(r_) for r_ in P)
    )
