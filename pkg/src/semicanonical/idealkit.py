"""Defining ideal of the semi-canonical embedding: toric binomials, lifted linear relations, graded pieces."""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from . import kernels
from .exactla import clear_denominators, format_rat, hnf_basis, integer_kernel, parse_rat, rank
from .polycore import INF, Cone, Polyhedron, dual_cone, module_generators
from .tgeom import Line, PolyhedralDivisor, SemiCanonicalEmbedding

Exp = tuple[int, ...]


class CompletenessWarning(UserWarning):
    """Binomials found up to the degree bound do not span the kernel lattice."""


def _clean(terms: Mapping) -> tuple:
    return tuple(sorted((tuple(k), Fraction(c)) for k, c in terms.items() if c != 0))


@dataclass(frozen=True)
class XPolynomial:
    """Polynomial in x_1..x_n; ``terms`` is a lex-sorted tuple of (exponent, coefficient)."""

    nvars: int
    terms: tuple[tuple[Exp, Fraction], ...]

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping) -> "XPolynomial":
        return cls(nvars, _clean(terms))

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "XPolynomial":
        return cls.from_dict(len(exp), {tuple(exp): Fraction(coeff)})

    @classmethod
    def binomial(cls, a: Sequence[int], b: Sequence[int]) -> "XPolynomial":
        return cls.from_dict(len(a), {tuple(a): 1, tuple(b): -1})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "XPolynomial") -> "XPolynomial":
        d = defaultdict(Fraction, self.as_dict())
        for k, c in other.terms:
            d[k] += c
        return XPolynomial.from_dict(self.nvars, d)

    def __neg__(self) -> "XPolynomial":
        return XPolynomial(self.nvars, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "XPolynomial") -> "XPolynomial":
        return self + (-other)

    def __mul__(self, other: "XPolynomial") -> "XPolynomial":
        d = defaultdict(Fraction)
        for a, c in self.terms:
            for b, e in other.terms:
                d[tuple(x + y for x, y in zip(a, b))] += c * e
        return XPolynomial.from_dict(self.nvars, d)

    def shift(self, exp: Sequence[int]) -> "XPolynomial":
        return XPolynomial(self.nvars, tuple((tuple(x + y for x, y in zip(a, exp)), c) for a, c in self.terms))

    def scale(self, c) -> "XPolynomial":
        return XPolynomial.from_dict(self.nvars, {a: c * e for a, e in self.terms})

    @property
    def degree(self) -> int:
        return max((sum(a) for a, _ in self.terms), default=0)

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_content(self) -> Exp:
        """Largest monomial dividing every term."""
        return tuple(min(col) for col in zip(*(a for a, _ in self.terms)))

    def normalized(self) -> "XPolynomial":
        """Scale so the leading (lex-largest) term has coefficient 1."""
        if not self.terms:
            return self
        return self.scale(1 / self.terms[-1][1])

    def to_json(self) -> dict:
        return {"terms": [{"exp": list(a), "coeff": format_rat(c)} for a, c in self.terms]}

    @classmethod
    def from_json(cls, data: dict, nvars: int | None = None) -> "XPolynomial":
        ts = {tuple(t["exp"]): parse_rat(str(t["coeff"])) for t in data["terms"]}
        n = nvars if nvars is not None else len(next(iter(ts)))
        return cls.from_dict(n, ts)

    def pretty(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{k + 1}" for k in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for a, c in reversed(self.terms):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, a) if e)
            if not mono:
                parts.append(format_rat(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rat(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class GradedLaurentElement:
    """``f * chi^u`` with ``f`` a Laurent polynomial in z_1..z_m."""

    degree: tuple[int, ...]
    terms: tuple[tuple[Exp, Fraction], ...]

    @classmethod
    def from_dict(cls, u: Sequence[int], terms: Mapping) -> "GradedLaurentElement":
        return cls(tuple(u), _clean(terms))

    def support(self) -> list[tuple[int, ...]]:
        """Lattice points ``(u, v)`` of the terms."""
        return [self.degree + v for v, _ in self.terms]

    def to_json(self) -> dict:
        return {
            "degree": list(self.degree),
            "terms": [{"exp": list(v), "coeff": format_rat(c)} for v, c in self.terms],
        }


@dataclass(frozen=True)
class IdealPresentation:
    nvars: int
    toric_generators: tuple[XPolynomial, ...]
    linear_lift_generators: tuple[XPolynomial, ...]
    degree_bound_used: int

    @property
    def generators(self) -> list[XPolynomial]:
        return list(self.toric_generators) + list(self.linear_lift_generators)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "toric_generators": [g.to_json() for g in self.toric_generators],
            "linear_lift_generators": [g.to_json() for g in self.linear_lift_generators],
            "degree_bound": self.degree_bound_used,
        }


@dataclass(frozen=True)
class GradedPiece:
    degree: tuple[int, ...]
    floors: tuple
    base_exponent: tuple | None
    degree_cap: int | None
    dim_AC: int
    dim_IL: int
    dim_AL: int

    @property
    def exact(self) -> bool:
        return self.dim_AC == self.dim_IL + self.dim_AL


# -- fibers of the monomial map -------------------------------------------------


def positive_grading(H: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """An integer vector pairing positively with every column of ``H``."""
    c = Cone.from_generators(H, len(H[0]))
    if not c.is_pointed:
        raise ValueError("columns do not span a pointed cone")
    d = dual_cone(c)
    w = [sum(f[t] for f in d.rays) for t in range(len(H[0]))]
    if d.lineality:
        # full-dimensionality fails; any lineality direction pairs to 0 on span(H)
        pass
    if any(sum(a * b for a, b in zip(w, h)) <= 0 for h in H):
        raise ValueError("no positive grading found")
    return tuple(w)


class Fibers:
    """Exponent fibers ``{alpha >= 0 : H alpha = b}`` with caching."""

    def __init__(self, H: Sequence[Sequence[int]]):
        self.H = [tuple(h) for h in H]
        self.n = len(self.H)
        self.dim = len(self.H[0])
        self.omega = positive_grading(self.H)
        self.wdeg = [sum(a * b for a, b in zip(self.omega, h)) for h in self.H]
        self._cache: dict = {}
        self._tails: dict = {}

    def image(self, alpha: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * h[t] for a, h in zip(alpha, self.H)) for t in range(self.dim))

    def fiber(self, b: Sequence[int]) -> list[Exp]:
        b = tuple(b)
        if b in self._cache:
            return self._cache[b]
        budget = sum(x * y for x, y in zip(self.omega, b))
        if budget < 0:
            out = []
        elif kernels.BACKEND != "cython":
            out = self._suffix(0, b)
        else:
            hi = [budget // w for w in self.wdeg]
            A, c = [], []
            for t in range(self.dim):
                row = [h[t] for h in self.H]
                A.append(row)
                c.append(-b[t])
                A.append([-x for x in row])
                c.append(b[t])
            out = kernels.box_points(A, c, [0] * self.n, hi)
        self._cache[b] = out
        return out

    def _suffix(self, k: int, b: tuple) -> list[Exp]:
        # exponents of x_k..x_n mapping to b; memoized so fibers share their tails
        key = (k, b)
        memo = self._tails
        if key in memo:
            return memo[key]
        if k == self.n:
            out = [()] if not any(b) else []
        else:
            out = []
            h = self.H[k]
            budget = sum(x * y for x, y in zip(self.omega, b))
            for a in range(budget // self.wdeg[k] + 1):
                rem = tuple(x - a * y for x, y in zip(b, h))
                out.extend((a,) + t for t in self._suffix(k + 1, rem))
        memo[key] = out
        return out


def monomials_upto(n: int, bound: int) -> Iterable[Exp]:
    for d in range(bound + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for k in combo:
                e[k] += 1
            yield tuple(e)


def _components(fiber: list[Exp]) -> list[list[Exp]]:
    """Components of the graph joining monomials that share a variable."""
    parent = list(range(len(fiber)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(fiber)):
        for j in range(i + 1, len(fiber)):
            if any(a and b for a, b in zip(fiber[i], fiber[j])):
                parent[find(i)] = find(j)
    groups = defaultdict(list)
    for i, a in enumerate(fiber):
        groups[find(i)].append(a)
    key = lambda a: (sum(a), a)
    comps = [sorted(g, key=key) for g in groups.values()]
    return sorted(comps, key=lambda g: key(g[0]))


def toric_ideal_generators(H: Sequence[Sequence[int]], degree_bound: int) -> list[XPolynomial]:
    """Minimal binomial generators of the toric ideal of ``H`` up to total degree ``degree_bound``.

    In each multidegree the minimal generators correspond to the connected
    components of the fiber graph (monomials adjacent when not coprime).
    """
    if degree_bound < 2:
        raise ValueError("degree_bound must be at least 2")
    F = Fibers(H)
    n = F.n
    seen = set()
    gens = []
    for alpha in monomials_upto(n, degree_bound):
        b = F.image(alpha)
        if b in seen:
            continue
        seen.add(b)
        fib = F.fiber(b)
        if len(fib) < 2:
            continue
        comps = _components(fib)
        reps = [c[0] for c in comps]
        for r in reps[1:]:
            if sum(reps[0]) <= degree_bound and sum(r) <= degree_bound:
                gens.append(XPolynomial.binomial(reps[0], r))
    gens.sort(key=lambda g: (g.degree, g.terms))
    _check_completeness(H, gens)
    return gens


def _check_completeness(H, gens: list[XPolynomial]) -> bool:
    n = len(H)
    cols = [list(h) for h in H]
    A = [[cols[k][t] for k in range(n)] for t in range(len(cols[0]))]
    target = integer_kernel(A, n)
    diffs = []
    for g in gens:
        (a, _), (b, _) = g.terms
        diffs.append([x - y for x, y in zip(a, b)])
    found = hnf_basis(diffs) if diffs else []
    if [tuple(r) for r in found] != [tuple(r) for r in target]:
        warnings.warn("toric binomials do not generate the kernel lattice; raise the degree bound",
                      CompletenessWarning, stacklevel=3)
        return False
    return True


# -- the polytope P and the generators of the line ideal --------------------------


def polytope_P(d: PolyhedralDivisor) -> Polyhedron:
    """``{(u, v) : v_i >= -Delta_i(u), sum v_i <= Delta_0(u) - 1, u in sigma_dual}``."""
    r, m = d.lattice_rank, d.m
    rows = []
    for i, c in enumerate(d.coefficients):
        if c.empty:
            continue
        for w in c.vertices:
            if i == 0:
                rows.append(list(w) + [Fraction(-1)] * m + [Fraction(-1)])
            else:
                rows.append(list(w) + [Fraction(int(j == i - 1)) for j in range(m)] + [Fraction(0)])
    for ray in d.tailcone.rays:
        rows.append([Fraction(x) for x in ray] + [Fraction(0)] * (m + 1))
    eqs = [[Fraction(x) for x in l] + [Fraction(0)] * (m + 1) for l in d.tailcone.lineality]
    return Polyhedron.from_inequalities(rows, r + m, eqs)


def line_generators(line: Line) -> list[tuple[tuple[int, ...], list[Fraction]]]:
    """Dehomogenized circuits ``c_0 + sum c_i z_i`` as (exponent, coefficient) term lists."""
    m = line.m
    out = []
    for c in line.relations():
        terms = {}
        for i, x in enumerate(c):
            if x:
                terms[tuple(int(j == i - 1) for j in range(m))] = Fraction(x)
        out.append(terms)
    return out


def ideal_generators_IL(e: SemiCanonicalEmbedding, line: Line, d: PolyhedralDivisor) -> list[GradedLaurentElement]:
    """``g z^v chi^u`` for circuits ``g`` of the line and ``(u, v)`` in the module generators of P."""
    if line.m != d.m:
        raise ValueError("line and divisor have different m")
    gs = line_generators(line)
    if not gs:
        return []
    P = polytope_P(d)
    gens = module_generators(P, e.dual_C) if not P.empty else []
    r = d.lattice_rank
    out = []
    for g in gs:
        for p in gens:
            u, v = p[:r], p[r:]
            terms = {tuple(a + b for a, b in zip(v, mono)): c for mono, c in g.items()}
            out.append(GradedLaurentElement.from_dict(u, terms))
    return sorted(set(out), key=lambda x: (x.degree, x.terms))


def lift_to_polynomial(g: GradedLaurentElement, e: SemiCanonicalEmbedding, fibers: Fibers | None = None) -> XPolynomial:
    """Replace each monomial by its minimal-degree, then lex-least, preimage."""
    F = fibers or Fibers(e.hilbert_basis)
    terms = {}
    for v, c in g.terms:
        b = g.degree + v
        fib = F.fiber(b)
        if not fib:
            raise ArithmeticError(f"monomial {list(b)} not in the semigroup of the Hilbert basis")
        best = min(fib, key=lambda a: (sum(a), a))
        terms[best] = terms.get(best, 0) + c
    return XPolynomial.from_dict(e.n, terms)


def substitute(f: XPolynomial, e: SemiCanonicalEmbedding) -> dict:
    """Image under ``x_k -> chi^{H_k}`` as a map lattice point -> coefficient."""
    out = defaultdict(Fraction)
    for a, c in f.terms:
        out[tuple(sum(x * h[t] for x, h in zip(a, e.hilbert_basis)) for t in range(len(e.hilbert_basis[0])))] += c
    return {k: v for k, v in out.items() if v}


def ideal_presentation(e: SemiCanonicalEmbedding, line: Line, d: PolyhedralDivisor, degree_bound: int = 6) -> IdealPresentation:
    """Generators of J(L): toric binomials of X(C) plus lifts of the line relations."""
    F = Fibers(e.hilbert_basis)
    toric = toric_ideal_generators(e.hilbert_basis, degree_bound)
    lifts = [lift_to_polynomial(g, e, F) for g in ideal_generators_IL(e, line, d)]
    return IdealPresentation(e.n, tuple(toric), tuple(lifts), degree_bound)


# -- bounded-degree membership ------------------------------------------------------


def _homogenizing_grading(polys: Sequence[XPolynomial], n: int) -> list[tuple[int, ...]]:
    """Rows of the finest grading making every polynomial homogeneous."""
    diffs = []
    for p in polys:
        base = p.terms[0][0]
        for a, _ in p.terms[1:]:
            diffs.append([x - y for x, y in zip(a, base)])
    if not diffs:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel(diffs, n)


def _gdeg(G, a) -> tuple:
    return tuple(sum(x * y for x, y in zip(g, a)) for g in G)


def _span_rank(rows: list[dict]) -> int:
    if not rows:
        return 0
    cols = sorted({k for r in rows for k in r})
    idx = {k: i for i, k in enumerate(cols)}
    mat = []
    for r in rows:
        vec = [Fraction(0)] * len(cols)
        for k, c in r.items():
            vec[idx[k]] = c
        mat.append(clear_denominators(vec))
    return rank(mat)


def macaulay_rows(gens: Sequence[XPolynomial], degree_bound: int, target=None, G=None) -> list[dict]:
    """Monomial multiples of ``gens`` of total degree at most the bound, optionally in one graded block."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    n = gens[0].nvars
    rows = []
    by_deg = defaultdict(list)
    for m in monomials_upto(n, degree_bound):
        by_deg[sum(m)].append(m)
    for g in gens:
        gd = _gdeg(G, g.terms[0][0]) if G is not None else None
        for k in range(degree_bound - g.degree + 1):
            for m in by_deg[k]:
                if target is not None and tuple(x + y for x, y in zip(gd, _gdeg(G, m))) != target:
                    continue
                rows.append(dict(g.shift(m).terms))
    return rows


def ideal_membership(f: XPolynomial, gens: Sequence[XPolynomial], degree_bound: int) -> bool:
    """Is ``f`` in the span of monomial multiples of ``gens`` of degree at most ``degree_bound``?"""
    if not f:
        return True
    if f.degree > degree_bound:
        raise ValueError("degree_bound is below deg f")
    gens = [g for g in gens if g]
    if not gens:
        return False
    G = _homogenizing_grading([f] + gens, f.nvars)
    # split f into graded blocks; each must lie in the span
    blocks = defaultdict(dict)
    for a, c in f.terms:
        blocks[_gdeg(G, a)][a] = c
    for target, part in blocks.items():
        rows = macaulay_rows(gens, degree_bound, target, G)
        if not rows:
            return False
        if _span_rank(rows) != _span_rank(rows + [part]):
            return False
    return True


def ideals_equal(A: Sequence[XPolynomial], B: Sequence[XPolynomial], degree_bound: int) -> tuple[bool, XPolynomial | None]:
    """Mutual bounded membership; returns the first generator that fails."""
    for f in A:
        if not ideal_membership(f, B, degree_bound):
            return False, f
    for f in B:
        if not ideal_membership(f, A, degree_bound):
            return False, f
    return True, None


# -- graded pieces ---------------------------------------------------------------------


def _fiber_points(e: SemiCanonicalEmbedding, u: Sequence[int], floors: Sequence) -> list[tuple[int, ...]]:
    """Lattice points ``v`` with ``(u, v)`` in the dual cone (bounded by the floors)."""
    m = e.m
    f0 = floors[0]
    lo = [-f for f in floors[1:]]
    cap = f0 + sum(floors[1:])
    if cap < 0:
        return []
    hi = [l + cap for l in lo]
    r = len(u)
    A, c = [], []
    for f in e.dual_C.facets:
        A.append(list(f[r:]))
        c.append(sum(a * b for a, b in zip(f[:r], u)))
    for q in e.dual_C.equations:
        A += [list(q[r:]), [-x for x in q[r:]]]
        s = sum(a * b for a, b in zip(q[:r], u))
        c += [s, -s]
    if m == 0:
        return [()]
    return kernels.box_points(A, c, lo, hi)


def graded_piece(e: SemiCanonicalEmbedding, line: Line, d: PolyhedralDivisor, u: Sequence[int],
                 generators: Sequence[GradedLaurentElement] | None = None) -> GradedPiece:
    """Dimensions of A(C)_u, I(L)_u and A(L)_u by enumeration and exact rank."""
    u = tuple(int(x) for x in u)
    sig = d.tailcone
    if any(sum(a * b for a, b in zip(r, u)) < 0 for r in sig.rays) or any(
        sum(a * b for a, b in zip(l, u)) != 0 for l in sig.lineality
    ):
        return GradedPiece(u, (), None, None, 0, 0, 0)
    floors = d.floors(u)
    if any(f == INF for f in floors):
        raise ValueError("graded pieces are infinite-dimensional when a coefficient is empty")
    cap = sum(floors)
    base = tuple(-f for f in floors[1:])
    pts = _fiber_points(e, u, floors)
    dim_AC = len(pts)
    dim_AL = max(0, cap + 1)
    gens = generators if generators is not None else ideal_generators_IL(e, line, d)
    rows = []
    for g in gens:
        du = tuple(a - b for a, b in zip(u, g.degree))
        if any(sum(a * b for a, b in zip(r, du)) < 0 for r in sig.rays):
            continue
        try:
            fl = d.floors(du)
        except ValueError:
            continue
        for w in _fiber_points(e, du, fl):
            rows.append({tuple(a + b for a, b in zip(v, w)): c for v, c in g.terms})
    dim_IL = _span_rank(rows)
    return GradedPiece(u, tuple(floors), base, cap, dim_AC, dim_IL, dim_AL)


def degree_slice(d: PolyhedralDivisor, grading: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Lattice points ``u`` of the dual tailcone with ``<u, grading> = k``."""
    sd = dual_cone(d.tailcone)
    r = d.lattice_rank
    rows = [list(f) + [0] for f in sd.facets]
    eqs = [list(grading) + [-k]] + [list(q) + [0] for q in sd.equations]
    P = Polyhedron.from_inequalities(rows, r, eqs)
    return P.lattice_points()


def dual_box(d: PolyhedralDivisor, bound: int) -> list[tuple[int, ...]]:
    """Lattice points of the dual tailcone with sup-norm at most ``bound``."""
    sd = dual_cone(d.tailcone)
    r = d.lattice_rank
    A = [list(f) for f in sd.facets]
    c = [0] * len(A)
    for q in sd.equations:
        A += [list(q), [-x for x in q]]
        c += [0, 0]
    if not A:
        A, c = [[0] * r], [0]
    return kernels.box_points(A, c, [-bound] * r, [bound] * r)
