"""Exact integer and rational linear algebra.

Matrices are plain lists of rows. Integer entries are Python ``int`` and
rational entries are :class:`fractions.Fraction`, so nothing here can
overflow or round.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Rat = Fraction
Vector = Sequence[int]
Matrix = Sequence[Sequence[int]]


def parse_rat(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; reject zero denominators and junk."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"malformed rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"malformed rational: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"malformed rational: {text!r}")
    return Fraction(p, q)


def format_rat(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def dot(a: Iterable, b: Iterable):
    return sum(x * y for x, y in zip(a, b))


def mat_vec(A: Matrix, x: Sequence) -> list:
    return [dot(row, x) for row in A]


def mat_mul(A: Matrix, B: Matrix) -> list[list]:
    Bt = list(zip(*B)) if B else []
    return [[dot(row, col) for col in Bt] for row in A]


def transpose(A: Matrix, ncols: int | None = None) -> list[list]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def primitive(v: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector (gcd 1)."""
    fr = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def clear_denominators(v: Sequence) -> list[int]:
    """Scale a rational vector by the lcm of its denominators."""
    fr = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    return [int(x * den) for x in fr]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(A: Matrix) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U A``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots, entries above each pivot reduced into
    ``[0, pivot)`` and zero rows at the bottom.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [[int(x) for x in row] for row in A]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        rows = [i for i in range(r, m) if H[i][c] != 0]
        if not rows:
            continue
        # fold every entry below row r in column c into row r via extended gcd
        piv = rows[0]
        if piv != r:
            H[r], H[piv] = H[piv], H[r]
            U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(Hr, Hi)]
            H[i] = [-bg * x + ag * y for x, y in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
            U[i] = [-bg * x + ag * y for x, y in zip(Ur, Ui)]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf_basis(rows: Iterable[Sequence[int]], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Canonical basis (nonzero HNF rows) of the lattice spanned by ``rows``."""
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return []
    H, _ = hermite_normal_form(rows)
    return [tuple(r) for r in H if any(r)]


def integer_kernel(A: Matrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Saturated lattice basis of ``{x in Z^n : A x = 0}``, in HNF."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [tuple(r) for r in identity(n)]
    At = transpose(A)
    H, U = hermite_normal_form(At)
    kernel = [U[i] for i in range(n) if not any(H[i])]
    return hnf_basis(kernel)


def rref(A: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    M = [[Fraction(x) for x in row] for row in A]
    if not M:
        return [], []
    m, n = len(M), len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M[:r], pivots


def nullspace(A: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Rational basis of ``{x : A x = 0}`` read off the RREF."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    R, pivots = rref(A) if A else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def rank(A: Sequence[Sequence]) -> int:
    """Exact rank over Q using fraction-free integer elimination."""
    rows = []
    for row in A:
        r = clear_denominators(row) if any(isinstance(x, Fraction) for x in row) else [int(x) for x in row]
        if any(r):
            rows.append(r)
    return _int_rank(rows)


def _int_rank(rows: list[list[int]]) -> int:
    rk = 0
    while rows:
        # pick the row with the leftmost leading entry as pivot
        lead = [next(i for i, x in enumerate(r) if x) for r in rows]
        c = min(lead)
        k = lead.index(c)
        piv = rows.pop(k)
        lead.pop(k)
        p = piv[c]
        rk += 1
        nxt = []
        for r, lc in zip(rows, lead):
            if lc == c:
                a = r[c]
                g = gcd(a, p)
                r = [(p // g) * x - (a // g) * y for x, y in zip(r, piv)]
                g2 = reduce(gcd, r, 0)
                if g2 == 0:
                    continue
                if g2 > 1:
                    r = [x // g2 for x in r]
            nxt.append(r)
        rows = nxt
    return rk


def rational_solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` over Q, or ``None`` when inconsistent."""
    m = len(A)
    if len(b) != m:
        raise ValueError(f"dimension mismatch: {m} rows but rhs of length {len(b)}")
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise ValueError("dimension mismatch: ragged matrix")
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return x


def det(A: Sequence[Sequence]) -> Fraction:
    M = [[Fraction(x) for x in row] for row in A]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        p = M[c][c]
        d *= p
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / p
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def in_lattice(x: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Is ``x`` an integer combination of the rows of ``basis``?"""
    if not basis:
        return not any(x)
    sol = rational_solve(transpose(basis), list(x))
    if sol is None:
        return False
    # basis rows independent (HNF), so the rational solution is unique
    return all(s.denominator == 1 for s in sol)
