"""Second homology after cutting a manifold along a level and regluing.

For ``M' = M_minus  union_U  M_plus`` glued by an automorphism ``G`` of the
middle piece ``U`` the Mayer-Vietoris sequence gives

    H_2(U) --k--> H_2(M_minus) + H_2(M_plus) --> H_2(M') --> H_1(U) --> 0

with the difference map ``k(v) = (A_minus v, -A_plus G v)``. The glued H_2
is ``coker(k)`` plus a free summand whose rank the caller declares (the
free part of H_1(U); one for the slices used here).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exact_linalg import (
    CokernelPresentation,
    cokernel_presentation,
    identity,
    integer_solve,
    is_unimodular,
    mat_vec,
    matmul,
    rank,
    unimodular_inverse,
)

MINUS = "-"
PLUS = "+"


class GluingError(ValueError):
    pass


@dataclass(frozen=True)
class GluingProblem:
    rank_u: int
    A_minus: tuple[tuple[int, ...], ...]
    A_plus: tuple[tuple[int, ...], ...]
    G: tuple[tuple[int, ...], ...]
    free_rank: int = 0
    name: str = ""

    def __post_init__(self):
        for label, M in (("A_minus", self.A_minus), ("A_plus", self.A_plus), ("G", self.G)):
            object.__setattr__(self, label, tuple(tuple(int(x) for x in row) for row in M))
            if any(len(row) != self.rank_u for row in getattr(self, label)):
                raise GluingError(f"{label} must have {self.rank_u} columns")
        if len(self.G) != self.rank_u:
            raise GluingError("gluing map must be square")
        if not is_unimodular(self.G):
            raise GluingError("gluing map must be unimodular")
        if self.free_rank < 0:
            raise GluingError("free rank must be non-negative")

    @property
    def rank_minus(self) -> int:
        return len(self.A_minus)

    @property
    def rank_plus(self) -> int:
        return len(self.A_plus)

    def difference_map(self) -> list[list[int]]:
        AG = matmul(self.A_plus, self.G) if self.A_plus else []
        return [list(r) for r in self.A_minus] + [[-x for x in r] for r in AG]

    def rebased(self, B: Sequence[Sequence[int]]) -> "GluingProblem":
        """The same problem after the change of basis ``B`` of H_2(U)."""
        if not is_unimodular(B):
            raise GluingError("change of basis must be unimodular")
        Binv = unimodular_inverse(B)
        return GluingProblem(
            self.rank_u,
            tuple(map(tuple, matmul(self.A_minus, B))) if self.A_minus else (),
            tuple(map(tuple, matmul(self.A_plus, B))) if self.A_plus else (),
            tuple(map(tuple, matmul(Binv, matmul(self.G, B)))),
            self.free_rank,
            self.name,
        )


@dataclass(frozen=True)
class GluedH2Presentation:
    problem: GluingProblem
    relations: tuple[tuple[int, ...], ...]  # the difference map, one row per ambient coordinate
    cokernel: CokernelPresentation

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.cokernel.invariant_factors)

    @property
    def rank(self) -> int:
        return self.cokernel.free_rank + self.problem.free_rank

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"

    def ambient(self, side: str, cls: Sequence[int]) -> tuple[int, ...]:
        m, n = self.problem.rank_minus, self.problem.rank_plus
        cls = tuple(int(x) for x in cls)
        if side == MINUS:
            if len(cls) != m:
                raise GluingError(f"class on side - needs {m} coordinates")
            return cls + (0,) * n
        if side == PLUS:
            if len(cls) != n:
                raise GluingError(f"class on side + needs {n} coordinates")
            return (0,) * m + cls
        raise GluingError(f"unknown side {side!r}")


def mv_presentation(p: GluingProblem) -> GluedH2Presentation:
    K = p.difference_map()
    rows = p.rank_minus + p.rank_plus
    coker = cokernel_presentation(K, rows=rows) if p.rank_u else cokernel_presentation([], rows=rows)
    return GluedH2Presentation(p, tuple(tuple(r) for r in K), coker)


def glued_class(pres: GluedH2Presentation, side: str, cls: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of the image of a side class (torsion first, then free)."""
    v = pres.ambient(side, cls)
    return pres.cokernel.coordinates(v) + (0,) * pres.problem.free_rank


def _relation_solve(pres: GluedH2Presentation, diff: Sequence[int]) -> Optional[tuple[int, ...]]:
    if pres.problem.rank_u == 0:
        return () if not any(diff) else None
    return integer_solve([list(r) for r in pres.relations], list(diff))


def classes_equal(pres: GluedH2Presentation, x, y) -> bool:
    """Equality of two side classes ``(side, coefficients)`` in the glued H_2."""
    vx = pres.ambient(*x)
    vy = pres.ambient(*y)
    diff = [a - b for a, b in zip(vx, vy)]
    return _relation_solve(pres, diff) is not None


def side_kernel_rank(pres: GluedH2Presentation, side: str) -> int:
    """Rank of the kernel of the side inclusion into the glued H_2 (0 when injective)."""
    m = pres.problem.rank_minus if side == MINUS else pres.problem.rank_plus
    cols = [glued_class(pres, side, [1 if i == j else 0 for i in range(m)]) for j in range(m)]
    free_start = len(pres.invariant_factors)
    M = [[c[r] for c in cols] for r in range(free_start, len(cols[0]))] if cols else []
    if not M:
        return m
    return m - rank(M)


# -- fixtures ---------------------------------------------------------------


SWAP = ((0, 1), (1, 0))


def product_gluing(swap: bool) -> GluingProblem:
    """The cut of a triple product of spheres along a level, reglued by the
    identity or by swapping the two sphere factors of the middle slice."""
    I = tuple(map(tuple, identity(2)))
    return GluingProblem(2, I, I, SWAP if swap else I, free_rank=1, name="example-2.1-swap" if swap else "example-2.1-identity")


NAMED_PROBLEMS = {
    "example-2.1-swap": lambda: product_gluing(True),
    "example-2.1-identity": lambda: product_gluing(False),
}

# The fixed spheres below and above the cut both sit over the second slice factor.
SPHERE_CLASS = (0, 1)


# -- Hirzebruch rigidity arithmetic -----------------------------------------


@dataclass(frozen=True)
class HirzebruchCertificate:
    k: int
    solutions: frozenset[int]
    reason: str
    checked_window: int

    @property
    def forced_zero(self) -> bool:
        return self.solutions == frozenset({0})


def hirzebruch_euler_rigidity(k: int, window: int = 50) -> HirzebruchCertificate:
    """Integers ``m`` for which ``s -> s, F -> F + m s`` preserves the form.

    The basis is ``s`` (self-intersection ``-k``) and ``F`` (square zero,
    ``s.F = 1``). Preserving ``F^2`` and ``s.F`` means ``-m^2 k + 2m = 0``
    and ``-k m + 1 = 1``. The solution set is derived algebraically and then
    confirmed against the intersection form on ``|m| <= window``.
    """
    if k < 0:
        raise GluingError("k must be non-negative")
    sols = {0}
    reason = "k*m = 0 with k > 0 forces m = 0" if k > 0 else "k = 0 reduces the first equation to 2m = 0"
    Q = [[-k, 1], [1, 0]]

    def pair(x, y):
        return sum(a * b for a, b in zip(x, mat_vec(Q, y)))

    brute = {m for m in range(-window, window + 1) if pair((m, 1), (m, 1)) == 0 and pair((m, 1), (1, 0)) == 1}
    if brute != sols:
        raise GluingError(f"algebraic solution {sorted(sols)} disagrees with the form check {sorted(brute)}")
    return HirzebruchCertificate(k, frozenset(sols), reason, window)
