"""Reference implementations of the enumeration kernels.

These are the pure-Python twins of ``_ckernels.pyx``. Both must return
identical results on identical input; the compiled versions only exist
because these loops dominate Hilbert-basis and fiber computations.
"""

from __future__ import annotations

from typing import Sequence


def irreducible_mask(cands: Sequence[Sequence[int]], facets: Sequence[Sequence[int]]) -> list[bool]:
    """Flag candidates ``x`` with no other candidate ``y`` such that
    ``x - y`` lies in the cone cut out by ``facets``.

    Candidates must be pairwise distinct and nonzero.
    """
    n = len(cands)
    # precompute facet values; x - y in cone iff fx[k] >= fy[k] for all k
    vals = [tuple(sum(a * b for a, b in zip(f, x)) for f in facets) for x in cands]
    out = []
    for i in range(n):
        vi = vals[i]
        red = False
        for j in range(n):
            if j == i:
                continue
            vj = vals[j]
            if all(a >= b for a, b in zip(vi, vj)):
                red = True
                break
        out.append(not red)
    return out


def box_points(
    A: Sequence[Sequence[int]],
    c: Sequence[int],
    lo: Sequence[int],
    hi: Sequence[int],
) -> list[tuple[int, ...]]:
    """All integer ``x`` with ``lo <= x <= hi`` and ``A x + c >= 0``."""
    d = len(lo)
    k = len(A)
    if any(l > h for l, h in zip(lo, hi)):
        return []
    # best[t][r]: max of sum_{i>=t} A[r][i] x_i over the box
    best = [[0] * k for _ in range(d + 1)]
    for t in range(d - 1, -1, -1):
        for r in range(k):
            a = A[r][t]
            best[t][r] = best[t + 1][r] + max(a * lo[t], a * hi[t])
    out: list[tuple[int, ...]] = []
    x = [0] * d
    partial = list(c)

    def rec(t: int, partial: list[int]) -> None:
        if t == d:
            if all(p >= 0 for p in partial):
                out.append(tuple(x))
            return
        nb = best[t + 1]
        col = [A[r][t] for r in range(k)]
        for v in range(lo[t], hi[t] + 1):
            nxt = [partial[r] + col[r] * v for r in range(k)]
            if all(nxt[r] + nb[r] >= 0 for r in range(k)):
                x[t] = v
                rec(t + 1, nxt)

    rec(0, partial)
    return out
