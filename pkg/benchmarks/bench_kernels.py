"""Time the exceptional-class search with the compiled and the pure-Python kernel.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both kernels must return identical candidate lists; the script exits non-zero
when they differ.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from semifree import _kernels_py, kernels
from semifree.exceptional import FormVector, _scale, max_degree

# (form, area bound); small volumes with many blowups push the degree bound up
CASES = [
    (FormVector(9, (4, 4, 1)), Fraction(9)),
    (FormVector(20, (6, 5, 4, 3, 3, 2, 1)), Fraction(80)),
    (FormVector(Fraction(7, 2), (1,) * 9), Fraction(4)),
    (FormVector(Fraction(10, 3), (1,) * 9), Fraction(4)),
]


def _run(kernel, v: FormVector, bound: Fraction):
    alpha, deltas, b = _scale(v, bound)
    out = []
    for a in range(1, max_degree(v, bound) + 1):
        out.append(kernel(a, alpha, deltas, b))
    return out


def _time(kernel, v, bound, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = _run(kernel, v, bound)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, res


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels._ckernels is None:
        print("compiled kernel not built; only the Python kernel is timed")
    print(f"{'form, bound':<40}{'python s':>10}{'compiled s':>12}{'speedup':>9}")
    ok = True
    for v, bound in CASES:
        tp, rp = _time(_kernels_py.exceptional_candidates, v, bound, args.repeat)
        if kernels._ckernels is not None:
            tc, rc = _time(kernels._ckernels.exceptional_candidates, v, bound, args.repeat)
            ok &= [sorted(map(tuple, x)) for x in rc] == [sorted(map(tuple, x)) for x in rp]
            print(f"{f'{v}, {bound}':<40}{tp:>10.4f}{tc:>12.4f}{tp / max(tc, 1e-9):>8.1f}x")
        else:
            print(f"{f'{v}, {bound}':<40}{tp:>10.4f}{'-':>12}{'-':>9}")
    if not ok:
        print("kernels disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
