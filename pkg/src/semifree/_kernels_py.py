"""Reference implementation of the exceptional-class search kernel.

All inputs are integers: the form ``(alpha; delta_1..delta_k)`` and the area
bound are pre-scaled by a common denominator so that areas are integers.
"""

from __future__ import annotations


def exceptional_candidates(a: int, alpha: int, deltas: list[int], bound: int) -> list[tuple[int, ...]]:
    """All ``b`` in ``[0, a]^k`` with ``sum b = 3a - 1``, ``sum b^2 = a^2 + 1`` and
    ``0 < a*alpha - sum b_i*delta_i <= bound``."""
    k = len(deltas)
    out: list[tuple[int, ...]] = []
    if k == 0:
        return out
    b = [0] * k
    base = a * alpha

    def rec(i: int, s: int, q: int, pair: int) -> None:
        m = k - i
        if m == 0:
            if s == 0 and q == 0:
                area = base - pair
                if 0 < area <= bound:
                    out.append(tuple(b))
            return
        # s integers in [0, a] with squares summing to q
        if s < 0 or q < 0 or q < s or q > a * s or s * s > m * q:
            return
        hi = min(a, s)
        d = deltas[i]
        for x in range(hi, -1, -1):
            xx = x * x
            if xx > q:
                continue
            b[i] = x
            rec(i + 1, s - x, q - xx, pair + x * d)
        b[i] = 0

    rec(0, 3 * a - 1, a * a + 1, 0)
    return out
