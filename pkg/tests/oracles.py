"""Independent brute-force oracles used to derive and freeze expected values.

Nothing here imports the package: each oracle recomputes its quantity from
first principles (Cramer's rule, plane sections, exhaustive search) so that a
bug in the library cannot hide behind a matching bug in the test.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def det(M):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        total += (-1) ** j * M[0][j] * det(minor)
    return total


def cramer(rows, rhs):
    """Solve a square system exactly; None when singular."""
    D = det(rows)
    if D == 0:
        return None
    out = []
    for j in range(len(rows)):
        Mj = [r[:j] + [b] + r[j + 1 :] for r, b in zip(rows, rhs)]
        out.append(Fraction(det(Mj)) / D)
    return tuple(out)


def feasible(halfspaces, x, strict_excluded=True):
    for normal, offset, excluded in halfspaces:
        s = sum(a * b for a, b in zip(normal, x)) - offset
        if s < 0 or (excluded and strict_excluded and s == 0):
            return False
    return True


def vertices(halfspaces, dim):
    """Vertices of ``{<n,x> >= c}`` with excluded facets strict."""
    pts = set()
    for combo in itertools.combinations(halfspaces, dim):
        x = cramer([list(n) for n, _, _ in combo], [Fraction(c) for _, c, _ in combo])
        if x is not None and feasible(halfspaces, x):
            pts.add(x)
    return pts


def plane_section(halfspaces, xi, t):
    """Vertices of the polygon ``P ∩ {<xi,x> = t}`` in R^3 (closure of excluded facets kept open)."""
    pts = set()
    for a, b in itertools.combinations(halfspaces, 2):
        rows = [list(a[0]), list(b[0]), list(xi)]
        x = cramer(rows, [Fraction(a[1]), Fraction(b[1]), Fraction(t)])
        if x is not None and feasible(halfspaces, x, strict_excluded=False):
            pts.add(x)
    return pts


def _diamond(x, y):
    """An exact monotone substitute for the polar angle of (x, y), in [0, 4)."""
    if y >= 0:
        return Fraction(y, 1) / (x + y) if x >= 0 else 1 - Fraction(x, 1) / (-x + y)
    return 2 - Fraction(y, 1) / (-x - y) if x < 0 else 3 + Fraction(x, 1) / (x - y)


def lattice_area_of_section(points, xi):
    """Area of a planar convex polygon in the plane ``<xi,x> = t`` measured in
    the lattice ``xi^perp ∩ Z^3`` (covolume |xi| for primitive xi)."""
    pts = list(points)
    if len(pts) < 3:
        return Fraction(0)
    c = tuple(sum(p[i] for p in pts) / len(pts) for i in range(3))
    e1 = tuple(pts[0][i] - c[i] for i in range(3))
    e2 = _cross(xi, e1)

    def angle(p):
        v = tuple(p[i] - c[i] for i in range(3))
        return _diamond(sum(a * b for a, b in zip(v, e1)), sum(a * b for a, b in zip(v, e2)))

    pts.sort(key=angle)
    S = [0, 0, 0]
    for p, q in zip(pts, pts[1:] + pts[:1]):
        cr = _cross(p, q)
        S = [S[i] + cr[i] for i in range(3)]
    dot_xi = sum(a * b for a, b in zip(S, xi))
    return abs(Fraction(dot_xi) / (2 * sum(x * x for x in xi)))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def exceptional_brute(k, alpha, deltas, bound, max_a):
    """Exceptional classes on CP2#k (k <= 8) with 0 < area <= bound and degree <= max_a.

    For k <= 8 a class is exceptional iff it is some E_i or has degree a >= 1,
    non-negative b, square -1 and canonical pairing -1.
    """
    out = []
    for i in range(k):
        b = [0] * k
        b[i] = -1
        area = Fraction(deltas[i])
        if 0 < area <= bound:
            out.append(((0, tuple(b)), area))
    for a in range(1, max_a + 1):
        for b in itertools.product(range(a + 1), repeat=k):
            if a * a - sum(x * x for x in b) != -1 or 3 * a - sum(b) != 1:
                continue
            area = a * Fraction(alpha) - sum(x * Fraction(d) for x, d in zip(b, deltas))
            if 0 < area <= bound:
                out.append(((a, tuple(b)), area))
    return out
