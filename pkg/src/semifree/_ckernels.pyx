# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exceptional-class search kernel (same contract as ``_kernels_py``).

Arithmetic is in 64-bit integers; the caller guarantees the scaled inputs
fit (see ``semifree.kernels``).
"""

from libc.stdlib cimport malloc, free


def exceptional_candidates(long long a, long long alpha, deltas, long long bound):
    cdef int k = len(deltas)
    out = []
    if k == 0:
        return out
    cdef long long *d = <long long *> malloc(k * sizeof(long long))
    cdef long long *b = <long long *> malloc(k * sizeof(long long))
    cdef long long *s = <long long *> malloc((k + 1) * sizeof(long long))
    cdef long long *q = <long long *> malloc((k + 1) * sizeof(long long))
    cdef long long *p = <long long *> malloc((k + 1) * sizeof(long long))
    cdef int i, m
    cdef long long x, hi, area
    cdef bint ok
    try:
        for i in range(k):
            d[i] = deltas[i]
        s[0] = 3 * a - 1
        q[0] = a * a + 1
        p[0] = 0
        i = 0
        b[0] = (a if a < s[0] else s[0]) + 1
        while i >= 0:
            # advance position i to its next candidate value
            b[i] -= 1
            if b[i] < 0:
                i -= 1
                continue
            x = b[i]
            if x * x > q[i]:
                continue
            s[i + 1] = s[i] - x
            q[i + 1] = q[i] - x * x
            p[i + 1] = p[i] + x * d[i]
            if i + 1 == k:
                if s[k] == 0 and q[k] == 0:
                    area = a * alpha - p[k]
                    if 0 < area <= bound:
                        out.append(tuple([b[m] for m in range(k)]))
                continue
            m = k - i - 1
            ok = (s[i + 1] >= 0 and q[i + 1] >= s[i + 1] and q[i + 1] <= a * s[i + 1]
                  and s[i + 1] * s[i + 1] <= m * q[i + 1])
            if not ok:
                continue
            i += 1
            hi = a if a < s[i] else s[i]
            b[i] = hi + 1
    finally:
        free(d)
        free(b)
        free(s)
        free(q)
        free(p)
    return out
