"""Exact integer and rational linear algebra.

Matrices are plain lists of rows holding Python ints (or Fractions where a
rational is unavoidable). Nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional, Sequence

IntMatrix = list[list[int]]
IntVector = tuple[int, ...]


class SnfDecomposition(NamedTuple):
    """``U * A * V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> list[int]:
        n = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(n)]

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


class CokernelPresentation(NamedTuple):
    """coker(A) = Z/d_1 + ... + Z/d_s + Z^free_rank.

    ``projection`` has one row per torsion summand (in the order of
    ``invariant_factors``) followed by one row per free summand.
    """

    invariant_factors: list[int]
    free_rank: int
    projection: IntMatrix

    def coordinates(self, v: Sequence[int]) -> IntVector:
        """Canonical coordinates of the image of ``v``; torsion entries reduced."""
        raw = mat_vec(self.projection, v)
        out = []
        for i, x in enumerate(raw):
            if i < len(self.invariant_factors):
                x %= self.invariant_factors[i]
            out.append(x)
        return tuple(out)


# -- small helpers ---------------------------------------------------------


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> IntMatrix:
    return [[0] * n for _ in range(m)]


def shape(A: Sequence[Sequence[int]]) -> tuple[int, int]:
    m = len(A)
    n = len(A[0]) if m else 0
    for row in A:
        if len(row) != n:
            raise ValueError("ragged matrix")
    return m, n


def to_matrix(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Copy into a fresh list-of-lists, rejecting non-integral entries."""
    out = []
    for row in A:
        r = []
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                if isinstance(x, Fraction) and x.denominator == 1:
                    x = int(x)
                else:
                    raise TypeError(f"non-integer matrix entry {x!r}")
            r.append(x)
        out.append(r)
    shape(out)
    return out


def transpose(A: Sequence[Sequence]) -> list[list]:
    m, n = shape(A)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    m, k = shape(A)
    k2, n = shape(B)
    if k != k2:
        raise ValueError(f"cannot multiply {m}x{k} by {k2}x{n}")
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(n)] for i in range(m)]


def mat_vec(A: Sequence[Sequence], v: Sequence) -> tuple:
    if A and len(A[0]) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum(a * b for a, b in zip(u, v))


def cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det(A: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination (exact for ints)."""
    n, n2 = shape(A)
    if n != n2:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("the zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


def is_unimodular_basis(*vectors: Sequence[int]) -> bool:
    """True iff the vectors (as columns) have determinant +-1."""
    if not vectors:
        return True
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        return False
    return abs(det([list(v) for v in vectors])) == 1


def is_unimodular(A: Sequence[Sequence[int]]) -> bool:
    m, n = shape(A)
    return m == n and abs(det(A)) == 1


# -- Smith normal form -----------------------------------------------------


def smith_normal_form(A: Sequence[Sequence[int]]) -> SnfDecomposition:
    """Smith normal form by elementary operations with min-|entry| pivots."""
    D = to_matrix(A)
    m, n = shape(D)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] != 0 and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return _finish_snf(U, D, V)
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return _finish_snf(U, D, V)


def _finish_snf(U, D, V) -> SnfDecomposition:
    m, n = shape(D)
    for t in range(min(m, n)):
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SnfDecomposition(U, D, V)


def unimodular_inverse(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    if not is_unimodular(A):
        raise ValueError("matrix is not unimodular")
    inv = rational_inverse(A)
    return [[int(x) for x in row] for row in inv]


# -- solving ---------------------------------------------------------------


def integer_solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[IntVector]:
    """Some integer ``x`` with ``A x = b``, or ``None`` if none exists."""
    A = to_matrix(A)
    m, n = shape(A)
    if len(b) != m:
        raise ValueError("right-hand side has the wrong length")
    if n == 0:
        return () if all(x == 0 for x in b) else None
    U, D, V = smith_normal_form(A)
    c = mat_vec(U, b)
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return mat_vec(V, y)


def cokernel_presentation(A: Sequence[Sequence[int]], rows: Optional[int] = None) -> CokernelPresentation:
    """Presentation of Z^m / A Z^n.

    ``rows`` gives the ambient rank when ``A`` has no columns.
    """
    A = [list(r) for r in A]
    m = len(A) if rows is None else rows
    if not A or not A[0]:
        return CokernelPresentation([], m, identity(m))
    U, D, V = smith_normal_form(A)
    n = len(D[0])
    torsion_rows, factors, free_rows = [], [], []
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            free_rows.append(U[i])
        elif d > 1:
            factors.append(d)
            torsion_rows.append([x % d for x in U[i]])
    return CokernelPresentation(factors, len(free_rows), torsion_rows + free_rows)


def rational_solve(A: Sequence[Sequence], b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """A rational solution of ``A x = b`` (free variables set to 0), or None."""
    m, n = shape(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return tuple(x)


def rational_inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n, n2 = shape(A)
    if n != n2:
        raise ValueError("inverse of a non-square matrix")
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        x = rational_solve(A, e)
        if x is None:
            raise ValueError("singular matrix")
        cols.append(x)
    return transpose(cols)


def rank(A: Sequence[Sequence[int]]) -> int:
    if not A or not A[0]:
        return 0
    return smith_normal_form(A).rank()


def kernel_basis(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer basis (as columns of the returned list of vectors) of ker A."""
    m, n = shape(A)
    if n == 0:
        return []
    if m == 0:
        return [list(r) for r in identity(n)]
    U, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(m, n)) if D[i][i] != 0)
    Vt = transpose(V)
    return [Vt[j] for j in range(r, n)]


def extend_to_basis(xi: Sequence[int]) -> tuple[IntVector, IntVector, IntVector]:
    """Return ``(u, w1, w2)`` with ``<xi,u> = 1``, ``<xi,w_i> = 0``, det = +1.

    ``xi`` must be a primitive 3-vector. The pair ``(w1, w2)`` is a lattice
    basis of the integer vectors orthogonal to ``xi``.
    """
    if len(xi) != 3 or not is_primitive(xi):
        raise ValueError("xi must be a primitive integer 3-vector")
    U, D, V = smith_normal_form([list(xi)])
    cols = transpose(V)
    s = U[0][0]  # xi . cols[0] == s**-1 * D[0][0] == s
    u = tuple(s * x for x in cols[0])
    w1, w2 = tuple(cols[1]), tuple(cols[2])
    if det([u, w1, w2]) < 0:
        w1, w2 = w2, w1
    assert dot(xi, u) == 1 and dot(xi, w1) == 0 and dot(xi, w2) == 0
    return u, w1, w2
