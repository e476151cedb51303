"""Kernel dispatch: compiled int64 loops when available, Python otherwise.

Set ``SEMICANONICAL_PURE=1`` to force the pure-Python kernels. Inputs whose
magnitudes could overflow int64 are always routed to the Python versions.
"""

from __future__ import annotations

import os
from typing import Sequence

from . import _purekernels

_LIMIT = 1 << 60

try:
    if os.environ.get("SEMICANONICAL_PURE"):
        raise ImportError("pure kernels forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def _maxabs(rows) -> int:
    return max((abs(x) for r in rows for x in r), default=0)


def irreducible_mask(cands: Sequence[Sequence[int]], facets: Sequence[Sequence[int]]) -> list[bool]:
    if not cands:
        return []
    if not facets:
        # the cone is the whole span: everything except a lone element is reducible
        return [len(cands) == 1] * len(cands)
    d = len(cands[0])
    if _ckernels is not None and d * _maxabs(cands) * _maxabs(facets) < _LIMIT:
        return _ckernels.irreducible_mask(cands, facets)
    return _purekernels.irreducible_mask(cands, facets)


def box_points(A, c, lo, hi) -> list[tuple[int, ...]]:
    """Integer points of ``{lo <= x <= hi, A x + c >= 0}`` in odometer order."""
    lo = [int(v) for v in lo]
    hi = [int(v) for v in hi]
    c = [int(v) for v in c]
    d = len(lo)
    span = max((max(abs(a), abs(b)) for a, b in zip(lo, hi)), default=0)
    bound = sum(abs(v) for v in c) + d * _maxabs(A) * span
    if _ckernels is not None and A and bound < _LIMIT:
        return _ckernels.box_points(A, c, lo, hi)
    return _purekernels.box_points(A, c, lo, hi)
