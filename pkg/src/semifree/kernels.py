"""Kernel selection: the compiled extension when it is built, else pure Python.

Set ``SEMIFREE_PURE_PYTHON=1`` to force the fallback. Inputs whose scaled
values might overflow 64-bit arithmetic always use the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("SEMIFREE_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "compiled" if _ckernels is not None else "python"
_LIMIT = 1 << 62


def _fits(a: int, alpha: int, deltas, bound: int) -> bool:
    worst = abs(a * alpha) + sum(abs(a * d) for d in deltas) + abs(bound) + 3 * a * a + 3
    return worst < _LIMIT


def exceptional_candidates(a: int, alpha: int, deltas, bound: int) -> list[tuple[int, ...]]:
    deltas = list(deltas)
    if _ckernels is not None and _fits(a, alpha, deltas, bound):
        return _ckernels.exceptional_candidates(a, alpha, deltas, bound)
    return _kernels_py.exceptional_candidates(a, alpha, deltas, bound)
