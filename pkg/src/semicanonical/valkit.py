"""Homogeneous valuations ``f chi^u -> psi(u) + ord_Q(f) gamma`` on A(L).

Values live in Z^r with the lexicographic order.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactla import clear_denominators, nullspace, rank, rational_solve
from .idealkit import (
    GradedLaurentElement,
    _fiber_points,
    degree_slice,
    dual_box,
    ideal_presentation,
)
from .polycore import INF, dual_cone
from .tgeom import Line, PolyhedralDivisor, SemiCanonicalEmbedding, _same_point
from .tropkit import WeightMatrix, iterated_initial, phi, trop_line


class ZeroElement(ValueError):
    pass


class NotABoundaryPoint(ValueError):
    """The valuation point lies in the torus part of the line; re-embed the line to include it."""


class NotFullRank(ValueError):
    pass


@dataclass(frozen=True)
class HomogeneousValuation:
    psi: tuple[tuple[int, ...], ...]  # r x rank(M)
    gamma: tuple[int, ...]
    point_index: int | None = None
    point_param: tuple[Fraction, Fraction] | None = None

    def __post_init__(self):
        if (self.point_index is None) == (self.point_param is None):
            raise ValueError("give exactly one of point_index or point_param")
        if len(self.gamma) != len(self.psi):
            raise ValueError("gamma length differs from the number of rows of psi")
        lead = next((x for x in self.gamma if x), 0)
        if lead < 0:
            raise ValueError("gamma must be lexicographically nonnegative")

    @property
    def r(self) -> int:
        return len(self.gamma)

    @property
    def full_rank(self) -> bool:
        k = len(self.psi[0]) if self.psi else 0
        if rank([list(row) for row in self.psi]) != k:
            return False
        aug = [list(row) + [g] for row, g in zip(self.psi, self.gamma)]
        return rank(aug) == k + 1

    def point(self, line: Line) -> tuple[Fraction, Fraction]:
        if self.point_param is not None:
            return self.point_param
        return line.boundary[self.point_index].param

    def boundary_index(self, line: Line) -> int:
        if self.point_index is not None:
            if not 0 <= self.point_index < len(line.boundary):
                raise NotABoundaryPoint(f"no boundary point with index {self.point_index}")
            return self.point_index
        for j, q in enumerate(line.boundary):
            if _same_point(q.param, self.point_param):
                return j
        raise NotABoundaryPoint("valuation point is not a boundary point of the line; re-embed the line to include it")

    def rho(self, u: Sequence[int], lam: int) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, u)) + lam * g for row, g in zip(self.psi, self.gamma))

    def to_json(self) -> dict:
        out = {"psi": [list(r) for r in self.psi], "gamma": list(self.gamma)}
        if self.point_index is not None:
            out["point_index"] = self.point_index
        else:
            out["point_param"] = [str(x) for x in self.point_param]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HomogeneousValuation":
        from .exactla import parse_rat

        pp = data.get("point_param")
        return cls(
            tuple(tuple(int(x) for x in r) for r in data["psi"]),
            tuple(int(x) for x in data["gamma"]),
            data.get("point_index"),
            tuple(parse_rat(x) for x in pp) if pp is not None else None,
        )


# -- order of vanishing along the line ---------------------------------------------


def _local_forms(line: Line, q: Sequence[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Each form as ``c0 + c1 t`` along ``s = q + t * q'`` with ``q'`` independent of ``q``."""
    a, b = q
    other = (Fraction(0), Fraction(1)) if a != 0 else (Fraction(1), Fraction(0))
    return [(f0 * a + f1 * b, f0 * other[0] + f1 * other[1]) for f0, f1 in line.forms]


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _ord_poly(p: list[Fraction]) -> int | None:
    return next((i for i, x in enumerate(p) if x), None)


def _common_numerators(line: Line, q, vs: Sequence[Sequence[int]]) -> tuple[int, list[list[Fraction]]]:
    """Write each ``z^v`` near ``q`` as ``t^base * P_v(t) / unit`` with a shared factor.

    Returns ``base`` and the polynomials ``P_v``; orders of linear
    combinations are ``base + ord(sum c_v P_v)``.
    """
    loc = _local_forms(line, q)
    m = line.m
    exps = [[-sum(v)] + list(v) for v in vs]
    E = [min(e[i] for e in exps) for i in range(m + 1)]
    base = sum(E[i] for i in range(m + 1) if loc[i][0] == 0)
    polys = []
    for e in exps:
        p = [Fraction(1)]
        for i in range(m + 1):
            k = e[i] - E[i]
            c0, c1 = loc[i]
            lin = [c0, c1]
            for _ in range(k):
                p = _poly_mul(p, lin)
        polys.append(p)
    return base, polys


def ord_at(line: Line, q, terms: Sequence[tuple[Sequence[int], Fraction]]) -> int:
    """Exact order of vanishing at ``q`` of ``sum c_v z^v`` restricted to the line."""
    vs = [v for v, _ in terms]
    base, polys = _common_numerators(line, q, vs)
    L = max(len(p) for p in polys)
    tot = [Fraction(0)] * L
    for (v, c), p in zip(terms, polys):
        for i, x in enumerate(p):
            tot[i] += c * x
    o = _ord_poly(tot)
    if o is None:
        raise ZeroElement("element vanishes on the line")
    return base + o


def valuation_eval(val: HomogeneousValuation, g: GradedLaurentElement, line: Line) -> tuple[int, ...]:
    if not g.terms:
        raise ZeroElement("zero element")
    q = val.point(line)
    o = ord_at(line, q, [(v, c) for v, c in g.terms])
    return val.rho(g.degree, o)


def monomial_order(line: Line, q, v: Sequence[int]) -> int:
    return ord_at(line, q, [(v, Fraction(1))])


def generator_values(e: SemiCanonicalEmbedding, line: Line, val: HomogeneousValuation) -> list[tuple[int, ...]]:
    """Values of the semi-canonical generators ``x_k``, in variable order."""
    r = e.rank_N
    q = val.point(line)
    return [val.rho(h[:r], monomial_order(line, q, h[r:])) for h in e.hilbert_basis]


# -- value semigroups ------------------------------------------------------------------


def _bounds(d: PolyhedralDivisor, line: Line, j: int, u) -> tuple:
    idx = set(line.boundary[j].indices)
    fl = d.floors(u)
    lo = -sum(fl[i] for i in idx)
    hi = sum(fl[i] for i in range(len(fl)) if i not in idx)
    return lo, hi


@dataclass(frozen=True)
class ValueSemigroup:
    r: int
    generators: tuple[tuple[int, ...], ...]
    valuation: HomogeneousValuation
    divisor: PolyhedralDivisor
    line: Line
    search_bound: int = 12

    @property
    def j(self) -> int:
        return self.valuation.boundary_index(self.line)

    def region_bounds(self, u: Sequence[int]) -> tuple:
        """``(lo, hi)`` for lambda at degree ``u``; ``hi < lo`` means empty."""
        return _bounds(self.divisor, self.line, self.j, u)

    def in_region(self, u: Sequence[int], lam: int) -> bool:
        sig = self.divisor.tailcone
        if any(sum(a * b for a, b in zip(r, u)) < 0 for r in sig.rays):
            return False
        lo, hi = self.region_bounds(u)
        return lo <= lam <= hi

    def contains(self, y: Sequence[int]) -> bool:
        """Is ``y = rho(u, lambda)`` for a lattice point of the region?"""
        val = self.valuation
        k = self.divisor.lattice_rank
        A = [list(row) + [g] for row, g in zip(val.psi, val.gamma)]
        if not nullspace(A, k + 1):
            sol = rational_solve(A, list(y))
            if sol is None or any(x.denominator != 1 for x in sol):
                return False
            return self.in_region([int(x) for x in sol[:k]], int(sol[k]))
        for u in dual_box(self.divisor, self.search_bound):
            lo, hi = self.region_bounds(u)
            for lam in range(int(lo), int(hi) + 1) if lo != -INF and hi != INF else ():
                if val.rho(u, lam) == tuple(y):
                    return True
        return False

    def grid(self, umin: int, umax: int, vmin: int, vmax: int) -> list[dict]:
        out = []
        for a in range(umin, umax + 1):
            for b in range(vmin, vmax + 1):
                out.append({"point": [a, b], "member": self.contains((a, b))})
        return out

    def to_json(self) -> dict:
        return {
            "generators": [list(g) for g in self.generators],
            "region": {
                "point_index": self.j,
                "lower": "-floor(Delta_j(u)) summed over forms vanishing at Q_j",
                "upper": "sum of floor(Delta_i(u)) over the remaining forms",
                "rho": {"psi": [list(r) for r in self.valuation.psi], "gamma": list(self.valuation.gamma)},
            },
        }


def value_semigroup(e: SemiCanonicalEmbedding, line: Line, d: PolyhedralDivisor,
                    val: HomogeneousValuation) -> ValueSemigroup:
    val.boundary_index(line)
    gens = tuple(sorted(set(generator_values(e, line, val))))
    return ValueSemigroup(val.r, gens, val, d, line)


# -- Khovanskii property ----------------------------------------------------------------


def slice_orders(e: SemiCanonicalEmbedding, line: Line, d: PolyhedralDivisor, u: Sequence[int], q) -> tuple[list[int], int]:
    """Orders at ``q`` realized by A(L)_u (one per element of an adapted basis) and dim A(L)_u."""
    floors = d.floors(u)
    if any(f == INF for f in floors):
        raise ValueError("infinite graded piece")
    vs = _fiber_points(e, u, floors)
    if not vs:
        return [], 0
    base, polys = _common_numerators(line, q, vs)
    L = max(len(p) for p in polys)
    rows = [clear_denominators(p + [Fraction(0)] * (L - len(p))) for p in polys]
    # echelon by lowest order: pivot columns are the realized orders
    orders = []
    work = [r[:] for r in rows]
    for col in range(L):
        piv = next((i for i, r in enumerate(work) if r[col] != 0), None)
        if piv is None:
            continue
        pr = work.pop(piv)
        orders.append(base + col)
        for i, r in enumerate(work):
            if r[col]:
                a, b = pr[col], r[col]
                work[i] = [a * x - b * y for x, y in zip(r, pr)]
    return orders, len(orders)


@dataclass(frozen=True)
class KhovanskiiResult:
    ok: bool
    degrees_checked: int
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"khovanskii": self.ok, "degrees_checked": self.degrees_checked}
        if self.witness is not None:
            out["witness"] = {"u": list(self.witness[0]), "order": self.witness[1]}
            out["reason"] = self.reason
        return out


def _degrees(d: PolyhedralDivisor, degree_bound: int, grading) -> list[tuple[int, ...]]:
    if grading is None:
        us = dual_box(d, degree_bound)
        return sorted(us, key=lambda u: (sum(abs(x) for x in u), u))
    out = []
    for k in range(degree_bound + 1):
        out += sorted(degree_slice(d, grading, k))
    return out


def khovanskii_check(e: SemiCanonicalEmbedding, line: Line, d: PolyhedralDivisor, val: HomogeneousValuation,
                     degree_bound: int = 6, grading: Sequence[int] | None = None) -> KhovanskiiResult:
    """Every value of A(L)_u (|u| bounded) lies in the semigroup generated by the generator values.

    Works with pairs ``(u, ord)``, which is equivalent to the values in
    ``Z^r`` when the valuation has full rank and stronger otherwise.
    """
    j = val.boundary_index(line)
    q = line.boundary[j].param
    r = e.rank_N
    gens = sorted({(h[:r], monomial_order(line, q, h[r:])) for h in e.hilbert_basis})
    sig = d.tailcone

    def in_sigma_dual(u):
        return all(sum(a * b for a, b in zip(ray, u)) >= 0 for ray in sig.rays) and all(
            sum(a * b for a, b in zip(l, u)) == 0 for l in sig.lineality)

    @lru_cache(maxsize=None)
    def reach(u: tuple) -> frozenset:
        if not any(u):
            return frozenset({0})
        out = set()
        for gu, go in gens:
            w = tuple(a - b for a, b in zip(u, gu))
            if in_sigma_dual(w):
                out |= {go + x for x in reach(w)}
        return frozenset(out)

    checked = 0
    for u in _degrees(d, degree_bound, grading):
        orders, dim = slice_orders(e, line, d, u, q)
        checked += 1
        fl = d.floors(u)
        dim_AL = max(0, sum(fl) + 1)
        if dim != dim_AL:
            return KhovanskiiResult(False, checked, (u, None), "adapted basis size differs from dim A(L)_u")
        got = reach(tuple(u))
        for o in orders:
            if o not in got:
                return KhovanskiiResult(False, checked, (u, o), "value not generated by the generator values")
    return KhovanskiiResult(True, checked)


def weight_matrix_from_valuation(e: SemiCanonicalEmbedding, line: Line, val: HomogeneousValuation,
                                 presentation=None, d: PolyhedralDivisor | None = None,
                                 degree_bound: int = 6) -> tuple[WeightMatrix, dict]:
    """Columns are the generator values; checks ``W`` in trop^r and the facet of the gamma-active row."""
    if not val.full_rank:
        raise NotFullRank("valuation is not of full rank")
    j = val.boundary_index(line)
    cols = generator_values(e, line, val)
    W = WeightMatrix(tuple(tuple(c[i] for c in cols) for i in range(val.r)))
    info = {}
    if presentation is None and d is not None:
        presentation = ideal_presentation(e, line, d, degree_bound)
    if presentation is not None:
        _, mono = iterated_initial(presentation.generators, W)
        info["in_trop"] = not mono
    r0 = next(i for i, g in enumerate(val.gamma) if g)
    ray = trop_line(line).rays[j]
    ordq = line.boundary[j].ord
    expected = phi(e, tuple(val.psi[r0]) + tuple(val.gamma[r0] * x for x in ordq))
    info["active_row"] = r0
    info["row_in_cone"] = W.rows[r0] == expected and val.gamma[r0] > 0
    info["cone_ray"] = list(ray)
    return W, info
