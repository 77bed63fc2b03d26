"""Exceptional classes in H_2 of the k-fold blowup of the projective plane.

A class ``(a; b_1, ..., b_k)`` stands for ``aL - sum b_i E_i``; the form
``(alpha; delta_1, ..., delta_k)`` has area ``a*alpha - sum b_i*delta_i``
on it. The standard Cremona move in the indices ``(i, j, l)`` is the
reflection in ``L - E_i - E_j - E_l``; it acts the same way on classes and
on forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .kernels import exceptional_candidates
from .polygon import Affine, as_fraction
from .reduced_space import CP2, S2XS2, ReducedSpace, SurfaceLattice, s2s2_basis_change

MAX_MOVES = 10_000


class ExceptionalError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class H2Class:
    a: int
    b: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))

    @classmethod
    def line(cls, k: int) -> "H2Class":
        return cls(1, (0,) * k)

    @classmethod
    def exceptional(cls, i: int, k: int) -> "H2Class":
        """``E_i`` (1-based)."""
        if not 1 <= i <= k:
            raise ExceptionalError(f"E{i} is not defined for k = {k}")
        return cls(0, tuple(-1 if j == i - 1 else 0 for j in range(k)))

    @classmethod
    def from_lattice(cls, coeffs: Sequence[int]) -> "H2Class":
        """From coefficients on ``(L, E_1, ..., E_k)``."""
        return cls(coeffs[0], tuple(-c for c in coeffs[1:]))

    def to_lattice(self) -> tuple[int, ...]:
        return (self.a,) + tuple(-x for x in self.b)

    @property
    def k(self) -> int:
        return len(self.b)

    def __add__(self, other: "H2Class") -> "H2Class":
        _same_k(self, other)
        return H2Class(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b)))

    def __sub__(self, other: "H2Class") -> "H2Class":
        _same_k(self, other)
        return H2Class(self.a - other.a, tuple(x - y for x, y in zip(self.b, other.b)))

    def __neg__(self) -> "H2Class":
        return H2Class(-self.a, tuple(-x for x in self.b))

    def __str__(self) -> str:
        parts = []
        if self.a:
            parts.append(("-" if self.a < 0 else "+", ("" if abs(self.a) == 1 else str(abs(self.a))) + "L"))
        for i, x in enumerate(self.b, 1):
            if x:
                coef = "" if abs(x) == 1 else str(abs(x))
                parts.append(("+" if x < 0 else "-", f"{coef}E{i}"))
        if not parts:
            return "0"
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return s + "".join(sign + term for sign, term in parts[1:])


@dataclass(frozen=True)
class FormVector:
    alpha: Fraction
    deltas: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "deltas", tuple(as_fraction(d) for d in self.deltas))

    @property
    def k(self) -> int:
        return len(self.deltas)

    @property
    def volume(self) -> Fraction:
        return self.alpha ** 2 - sum(d * d for d in self.deltas)

    @property
    def reduced(self) -> bool:
        d = list(self.deltas) + [Fraction(0)] * max(0, 3 - self.k)
        sorted_ok = all(x >= y for x, y in zip(self.deltas, self.deltas[1:]))
        return sorted_ok and all(x > 0 for x in self.deltas) and d[0] + d[1] + d[2] <= self.alpha

    def area(self, x: H2Class) -> Fraction:
        if x.k != self.k:
            raise ExceptionalError("class and form have different numbers of blowups")
        return x.a * self.alpha - sum(b * d for b, d in zip(x.b, self.deltas))

    def __str__(self) -> str:
        inner = ", ".join(str(d) for d in self.deltas)
        return f"({self.alpha}; {inner})"


def _same_k(x, y) -> None:
    if len(x.b) != len(y.b):
        raise ExceptionalError("classes live in different blowups")


def pairing(x: H2Class, y: H2Class) -> int:
    _same_k(x, y)
    return x.a * y.a - sum(p * q for p, q in zip(x.b, y.b))


def canonical_pairing(x: H2Class) -> int:
    """``K.x`` with ``K = -3L + sum E_i``."""
    return -3 * x.a + sum(x.b)


def cremona_move(x: Union[H2Class, FormVector], idx: tuple[int, int, int]):
    """Reflection in ``L - E_i - E_j - E_l`` (1-based, distinct indices)."""
    k = x.k
    i, j, l = idx
    if len({i, j, l}) != 3 or not all(1 <= n <= k for n in idx):
        raise ExceptionalError(f"Cremona indices {idx} are invalid for k = {k}")
    if isinstance(x, H2Class):
        a, b = x.a, list(x.b)
    else:
        a, b = x.alpha, list(x.deltas)
    s = b[i - 1] + b[j - 1] + b[l - 1]
    c = a - s
    a2 = a + c
    for n in (i, j, l):
        b[n - 1] += c
    return H2Class(a2, tuple(b)) if isinstance(x, H2Class) else FormVector(a2, tuple(b))


def permute(x: Union[H2Class, FormVector], perm: Sequence[int]):
    """New position ``n`` takes the old entry ``perm[n]`` (0-based)."""
    if isinstance(x, H2Class):
        return H2Class(x.a, tuple(x.b[p] for p in perm))
    return FormVector(x.alpha, tuple(x.deltas[p] for p in perm))


def is_exceptional(x: H2Class) -> bool:
    if pairing(x, x) != -1 or canonical_pairing(x) != -1:
        return False
    pad = max(0, 3 - x.k)
    a, b = x.a, list(x.b) + [0] * pad
    for _ in range(MAX_MOVES):
        if a < 0:
            return False
        if a == 0:
            return sorted(b) == [-1] + [0] * (len(b) - 1)
        if any(v < 0 for v in b):
            return False
        b.sort(reverse=True)
        s = b[0] + b[1] + b[2]
        if a >= s:
            return False
        c = a - s
        a += c
        for n in range(3):
            b[n] += c
    raise ExceptionalError("Cremona reduction did not terminate within the move guard")


# -- reduction of forms -----------------------------------------------------


@dataclass(frozen=True)
class Move:
    kind: str  # "sort" or "cremona"
    data: tuple[int, ...]


@dataclass(frozen=True)
class Reduction:
    form: FormVector
    log: tuple[Move, ...]

    def replay(self, x: H2Class) -> H2Class:
        for m in self.log:
            x = permute(x, m.data) if m.kind == "sort" else cremona_move(x, m.data)
        return x

    def unreplay(self, x: H2Class) -> H2Class:
        for m in reversed(self.log):
            if m.kind == "sort":
                inv = [0] * len(m.data)
                for new, old in enumerate(m.data):
                    inv[old] = new
                x = permute(x, inv)
            else:
                x = cremona_move(x, m.data)
        return x


def reduce_form(v: FormVector) -> Reduction:
    if v.volume <= 0:
        raise ExceptionalError("form has non-positive volume")
    if any(d <= 0 for d in v.deltas):
        raise ExceptionalError("blowup sizes must be positive")
    log: list[Move] = []
    for _ in range(MAX_MOVES):
        perm = tuple(sorted(range(v.k), key=lambda n: (-v.deltas[n], n)))
        if perm != tuple(range(v.k)):
            log.append(Move("sort", perm))
            v = permute(v, perm)
        d = list(v.deltas) + [Fraction(0)] * max(0, 3 - v.k)
        if d[0] + d[1] + d[2] <= v.alpha:
            return Reduction(v, tuple(log))
        if v.k < 3:
            raise ExceptionalError("form is negative on L - E1 - E2; it is not a blowup form")
        log.append(Move("cremona", (1, 2, 3)))
        v = cremona_move(v, (1, 2, 3))
        if any(x <= 0 for x in v.deltas) or v.alpha <= 0:
            raise ExceptionalError("Cremona step produced a non-positive entry; not a blowup form")
    raise ExceptionalError("reduction did not terminate within the move guard")


# -- enumeration ------------------------------------------------------------


def max_degree(v: FormVector, bound) -> int:
    """Largest ``a`` an exceptional class of area at most ``bound`` can have.

    For an exceptional class with ``a > 0`` the ``b_i`` are non-negative with
    ``|b|^2 = a^2 + 1``. Cauchy-Schwarz gives ``a*alpha - B <= |b||delta|``,
    so either ``a*alpha <= B`` or ``(a*alpha - B)^2 <= (a^2 + 1)(alpha^2 - V)``
    with ``V`` the volume; the second is a quadratic in ``a`` with leading
    coefficient ``V > 0``.
    """
    B = as_fraction(bound)
    V = v.volume
    if V <= 0:
        raise ExceptionalError("form has non-positive volume")
    s = sum(d * d for d in v.deltas)
    # roots of V a^2 - 2 alpha B a + (B^2 - s) = 0
    disc = (v.alpha * B) ** 2 - V * (B * B - s)
    hi = 0
    if disc >= 0:
        # integer upper bound of (alpha B + sqrt(disc)) / V
        root = _isqrt_ceil(disc)
        hi = _ceil((v.alpha * B + root) / V)
    lin = _floor(B / v.alpha) if v.alpha > 0 else 0
    return max(hi, lin, 0)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _isqrt_ceil(x: Fraction) -> Fraction:
    """A rational upper bound for ``sqrt(x)`` (tight to 1/denominator)."""
    n, d = x.numerator, x.denominator
    r = math.isqrt(n * d)
    if r * r < n * d:
        r += 1
    return Fraction(r, d)


def _scale(v: FormVector, bound: Fraction) -> tuple[int, list[int], int]:
    den = math.lcm(v.alpha.denominator, bound.denominator, *(d.denominator for d in v.deltas))
    return int(v.alpha * den), [int(d * den) for d in v.deltas], int(bound * den)


def enumerate_exceptional(k: int, area_bound, v: FormVector) -> list[tuple[H2Class, Fraction]]:
    """All exceptional classes with ``0 < area <= area_bound``, sorted by (area, class)."""
    if v.k != k:
        raise ExceptionalError("form has the wrong number of blowups")
    B = as_fraction(area_bound)
    out: list[tuple[H2Class, Fraction]] = []
    for i in range(1, k + 1):
        e = H2Class.exceptional(i, k)
        ar = v.area(e)
        if 0 < ar <= B:
            out.append((e, ar))
    if B > 0 and k > 0:
        top = max_degree(v, B)
        if top > 10_000:
            raise ExceptionalError(f"area bound {B} needs degrees up to {top}; beyond the search guard")
        alpha, deltas, bound = _scale(v, B)
        for a in range(1, top + 1):
            for b in exceptional_candidates(a, alpha, deltas, bound):
                x = H2Class(a, b)
                if is_exceptional(x):
                    out.append((x, v.area(x)))
    out.sort(key=lambda p: (p[1], p[0].a, tuple(-c for c in p[0].b)))
    return out


def emin_set(v: FormVector) -> frozenset[H2Class]:
    """Exceptional classes of minimal positive area (ties returned in full).

    Raises :class:`ExceptionalError` when ``v`` is not a blowup form.
    """
    if v.k == 0:
        return frozenset()
    reduce_form(v)  # validity: positive volume and a reduction exists
    found = enumerate_exceptional(v.k, min(v.deltas), v)
    m = min(a for _, a in found)
    return frozenset(x for x, a in found if a == m)


def emin_candidates(v: FormVector) -> frozenset[H2Class]:
    """The closed-form shapes for a reduced form: ``E_i`` and ``L - E1 - E2``."""
    k = v.k
    cands = {H2Class.exceptional(i, k) for i in range(1, k + 1)}
    if k >= 2:
        cands.add(H2Class(1, (1, 1) + (0,) * (k - 2)))
    return frozenset(cands)


# -- the sets E' and D ------------------------------------------------------


class Cp2Chart:
    """Coordinates of a reduced space's H_2 in the ``(L, E_1, ..., E_k)`` model."""

    def __init__(self, space: ReducedSpace):
        lat = space.lattice
        self.space = space
        self.change = None
        if lat.model == S2XS2:
            if lat.k == 0:
                raise ExceptionalError("the product of two spheres has no exceptional classes")
            self.change = s2s2_basis_change(SurfaceLattice(CP2, lat.k + 1))
        self.k = lat.k + (1 if self.change else 0)

    def to_cp2(self, y: Sequence[int]) -> H2Class:
        coeffs = self.change.unapply(y) if self.change else tuple(y)
        return H2Class.from_lattice(coeffs)

    def native(self, x: H2Class) -> tuple[int, ...]:
        c = x.to_lattice()
        return self.change.apply(c) if self.change else c

    def profile(self, x: H2Class) -> Affine:
        return self.space.area(self.native(x))

    def form_vector(self, t) -> FormVector:
        t = as_fraction(t)
        alpha = self.profile(H2Class.line(self.k))(t)
        deltas = tuple(self.profile(H2Class.exceptional(i, self.k))(t) for i in range(1, self.k + 1))
        return FormVector(alpha, deltas)


@dataclass(frozen=True)
class EPrimeReport:
    level: Fraction
    sample: Fraction
    eprime: frozenset[H2Class]
    D: frozenset[H2Class]

    @property
    def agree(self) -> bool:
        return self.eprime == self.D


class EPrimeMismatch(ExceptionalError):
    def __init__(self, report: EPrimeReport):
        self.report = report
        only_e = sorted(str(x) for x in report.eprime - report.D)
        only_d = sorted(str(x) for x in report.D - report.eprime)
        super().__init__(f"E' differs from D at level {report.level}: only in E' {only_e}, only in D {only_d}")


def eprime_set(wall, sample=None, check: bool = True) -> EPrimeReport:
    """Exceptional classes whose area below the wall is exactly ``level - t``.

    ``wall`` is a :class:`semifree.morse_wall.WallCrossing`; the search runs at
    ``sample`` (default: three quarters of the way up the regular interval).
    With ``check`` the result must equal the collapsing classes ``D``.
    """
    lam = wall.level
    if wall.below is None:
        return EPrimeReport(lam, lam, frozenset(), frozenset())
    space = wall.below.space
    lo, hi = wall.below.interval
    t = as_fraction(sample) if sample is not None else lo + 3 * (hi - lo) / 4
    if not lo < t < hi:
        raise ExceptionalError("sample level must lie inside the regular interval below the wall")
    if space.lattice.model == S2XS2 and space.lattice.k == 0:
        found: frozenset[H2Class] = frozenset()
        D: frozenset[H2Class] = frozenset(tuple(c) for c in wall.D)
    else:
        chart = Cp2Chart(space)
        D = frozenset(chart.to_cp2(c) for c in wall.D)
        v = chart.form_vector(t)
        target = Affine(lam, -1)
        found = frozenset(
            x for x, _ in enumerate_exceptional(v.k, lam - t, v) if chart.profile(x) == target
        )
    rep = EPrimeReport(lam, t, found, D)
    if check and not rep.agree:
        raise EPrimeMismatch(rep)
    return rep
