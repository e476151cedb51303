"""Polyhedral divisors on P^1, lines in P^m, and the semi-canonical embedding."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .exactla import format_rat, parse_rat, primitive, rank
from .polycore import (
    INF,
    Cone,
    NotPointed,
    Polyhedron,
    dual_cone,
    hilbert_basis,
    support_value,
)

Point = tuple[Fraction, Fraction]
Form = tuple[Fraction, Fraction]  # (beta, alpha) for beta*s0 + alpha*s1


class InvalidDivisor(ValueError):
    pass


def _proj_key(p: Sequence[Fraction]) -> Point:
    a, b = Fraction(p[0]), Fraction(p[1])
    if a == 0 and b == 0:
        raise ValueError("(0:0) is not a point of P^1")
    s = a if a != 0 else b
    return (a / s, b / s)


def _same_point(p: Sequence, q: Sequence) -> bool:
    return p[0] * q[1] - p[1] * q[0] == 0


@dataclass(frozen=True)
class PolyhedralDivisor:
    """``D = sum Delta_i * P_i`` on P^1 with common tailcone ``sigma``."""

    lattice_rank: int
    tailcone: Cone
    points: tuple[Point, ...]
    coefficients: tuple[Polyhedron, ...]

    def __post_init__(self):
        if len(self.points) != len(self.coefficients):
            raise InvalidDivisor("one coefficient per point is required")
        if len(self.points) < 2:
            raise InvalidDivisor("at least two points are required")
        for p in self.points:
            if p[0] == 0 and p[1] == 0:
                raise InvalidDivisor("(0:0) is not a point of P^1")
        for p, q in combinations(self.points, 2):
            if _same_point(p, q):
                raise InvalidDivisor("points must be distinct")
        for c in self.coefficients:
            if c.ambient_rank != self.lattice_rank:
                raise InvalidDivisor("coefficient rank differs from lattice rank")
            if not c.empty and not c.tailcone.same_set(self.tailcone):
                raise InvalidDivisor("coefficient tailcone differs from the divisor tailcone")

    @property
    def m(self) -> int:
        return len(self.points) - 1

    @classmethod
    def build(cls, tail_rays, points, coefficients, lattice_rank: int | None = None) -> "PolyhedralDivisor":
        """``coefficients`` are vertex lists, ``None`` meaning empty."""
        r = lattice_rank if lattice_rank is not None else len(tail_rays[0])
        tail = Cone.from_generators(tail_rays, r) if tail_rays else Cone.zero(r)
        polys = tuple(
            Polyhedron.empty_set(tail) if c is None else Polyhedron.from_vertices(c, tail) for c in coefficients
        )
        pts = tuple((Fraction(a), Fraction(b)) for a, b in points)
        return cls(r, tail, pts, polys)

    def support(self, i: int, u: Sequence) -> Fraction | float:
        return support_value(self.coefficients[i], u)

    def floors(self, u: Sequence) -> list[int | float]:
        out = []
        for i in range(len(self.points)):
            s = self.support(i, u)
            out.append(INF if s == INF else math.floor(s))
        return out

    def check_positivity(self) -> bool:
        """Heuristic properness test; warns instead of failing (pointedness of C is enforced)."""
        if any(c.empty for c in self.coefficients):
            return True
        rays = dual_cone(self.tailcone).rays
        sums = [sum(support_value(c, u) for c in self.coefficients) for u in rays]
        ok = all(s >= 0 for s in sums) and any(s > 0 for s in sums)
        if not ok:
            warnings.warn("coefficient sum may not be a proper subset of the tailcone", stacklevel=2)
        return ok

    def to_json(self) -> dict:
        return {
            "rank_N": self.lattice_rank,
            "tailcone_rays": [list(r) for r in self.tailcone.rays],
            "points": [[format_rat(a), format_rat(b)] for a, b in self.points],
            "coefficients": [
                {"empty": c.empty, "vertices": [[format_rat(x) for x in v] for v in c.vertices]}
                for c in self.coefficients
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolyhedralDivisor":
        r = int(data["rank_N"])
        coeffs = []
        for c in data["coefficients"]:
            if c.get("empty"):
                coeffs.append(None)
            else:
                verts = [[parse_rat(x) for x in v] for v in c["vertices"]]
                if not verts:
                    raise InvalidDivisor("nonempty coefficient needs at least one vertex")
                for v in verts:
                    if len(v) != r:
                        raise InvalidDivisor("vertex dimension differs from rank_N")
                coeffs.append(verts)
        pts = [(parse_rat(a), parse_rat(b)) for a, b in data["points"]]
        return cls.build([tuple(x) for x in data["tailcone_rays"]], pts, coeffs, r)


@dataclass(frozen=True)
class BoundaryPoint:
    param: Point
    ord: tuple[int, ...]
    indices: tuple[int, ...]  # forms vanishing here

    @property
    def multiplicity(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class Line:
    """A line in P^m meeting the torus, parametrized by linear forms ``l_i(s0, s1)``."""

    forms: tuple[Form, ...]
    boundary: tuple[BoundaryPoint, ...]

    @property
    def m(self) -> int:
        return len(self.forms) - 1

    @classmethod
    def from_forms(cls, forms: Sequence[Sequence]) -> "Line":
        fs = tuple((Fraction(b), Fraction(a)) for b, a in forms)
        if len(fs) < 2:
            raise ValueError("a line needs at least two forms")
        if any(b == 0 and a == 0 for b, a in fs):
            raise ValueError("a form vanishes identically: the line misses the torus")
        if rank([list(f) for f in fs]) != 2:
            raise ValueError("forms must span a two-dimensional space")
        zeros: list[Point] = []
        for b, a in fs:
            z = _proj_key((a, -b))
            if not any(_same_point(z, q) for q in zeros):
                zeros.append(z)
        pts = []
        for q in zeros:
            vanish = tuple(i for i, (b, a) in enumerate(fs) if b * q[0] + a * q[1] == 0)
            o0 = int(0 in vanish)
            ords = tuple(int(i in vanish) - o0 for i in range(1, len(fs)))
            pts.append(BoundaryPoint(q, ords, vanish))
        return cls(fs, tuple(pts))

    def eval(self, s: Sequence) -> list[Fraction]:
        return [b * s[0] + a * s[1] for b, a in self.forms]

    def relations(self) -> list[tuple[int, ...]]:
        """All circuits ``c`` with ``sum c_i l_i = 0``: primitive, first nonzero positive."""
        n = len(self.forms)
        par = [[self.forms[i][0] * self.forms[j][1] - self.forms[i][1] * self.forms[j][0] == 0 for j in range(n)] for i in range(n)]
        out = set()
        for i, j in combinations(range(n), 2):
            if par[i][j]:
                (bi, ai), (bj, aj) = self.forms[i], self.forms[j]
                s = bi / bj if bj != 0 else ai / aj
                c = [Fraction(0)] * n
                c[i], c[j] = Fraction(1), -s
                out.add(_normalize(c))
        for i, j, k in combinations(range(n), 3):
            if par[i][j] or par[i][k] or par[j][k]:
                continue
            (b1, a1), (b2, a2), (b3, a3) = self.forms[i], self.forms[j], self.forms[k]
            # cross-product of the 2x3 coefficient matrix
            c = [Fraction(0)] * n
            c[i] = b2 * a3 - a2 * b3
            c[j] = a1 * b3 - b1 * a3
            c[k] = b1 * a2 - a1 * b2
            out.add(_normalize(c))
        return sorted(out, key=lambda c: (tuple(i for i, x in enumerate(c) if x), c))

    def to_json(self) -> dict:
        return {
            "forms": [[format_rat(b), format_rat(a)] for b, a in self.forms],
            "boundary": [
                {"param": [format_rat(x) for x in q.param], "ord": list(q.ord)} for q in self.boundary
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Line":
        line = cls.from_forms([[parse_rat(b), parse_rat(a)] for b, a in data["forms"]])
        if "boundary" in data:
            given = [(_proj_key([parse_rat(x) for x in q["param"]]), tuple(q["ord"])) for q in data["boundary"]]
            have = [(q.param, q.ord) for q in line.boundary]
            if sorted(given) != sorted(have):
                raise ValueError("boundary data inconsistent with the forms")
        return line


def _normalize(c: Sequence[Fraction]) -> tuple[int, ...]:
    p = primitive(c)
    lead = next(x for x in p if x)
    return tuple(-x for x in p) if lead < 0 else tuple(p)


def line_from_divisor(d: PolyhedralDivisor) -> Line:
    """``l_i = b_i s0 - a_i s1`` vanishes exactly at ``P_i = (a_i : b_i)``."""
    return Line.from_forms([(b, -a) for a, b in d.points])


def build_cone_C(d: PolyhedralDivisor) -> Cone:
    """Cone over ``{Delta_i x e_i} u sigma x 0`` with ``e_0 = -sum e_i``."""
    r, m = d.lattice_rank, d.m
    gens = []
    for i, c in enumerate(d.coefficients):
        if c.empty:
            continue
        e = [-1] * m if i == 0 else [int(j == i - 1) for j in range(m)]
        for w in c.vertices:
            gens.append(primitive(list(w) + e))
    for ray in d.tailcone.rays:
        gens.append(tuple(ray) + (0,) * m)
    for l in d.tailcone.lineality:
        gens.append(tuple(l) + (0,) * m)
        gens.append(tuple(-x for x in l) + (0,) * m)
    if not gens:
        raise NotPointed("cone C is the origin; no coefficients and trivial tailcone")
    C = Cone.from_generators(gens, r + m)
    if not C.is_pointed:
        raise NotPointed("cone C is not pointed: invalid divisor data")
    return C


@dataclass(frozen=True)
class SemiCanonicalEmbedding:
    rank_N: int
    m: int
    cone_C: Cone | None
    dual_C: Cone | None
    hilbert_basis: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.hilbert_basis)

    @property
    def names(self) -> list[str]:
        return [f"x{k + 1}" for k in range(self.n)]

    def degree(self, k: int) -> tuple[int, ...]:
        return self.hilbert_basis[k]

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], rank_N: int) -> "SemiCanonicalEmbedding":
        """Embedding given by a hand-picked list of degrees (kept in the given order)."""
        cols = tuple(tuple(int(x) for x in c) for c in cols)
        return cls(rank_N, len(cols[0]) - rank_N, None, None, cols)

    def to_json(self) -> dict:
        out = {"rank_N": self.rank_N, "m": self.m, "hilbert_basis": [list(h) for h in self.hilbert_basis],
               "variables": self.names}
        if self.cone_C is not None:
            out["cone_C"] = self.cone_C.to_json()
            out["dual_C"] = self.dual_C.to_json()
        return out


def build_embedding(d: PolyhedralDivisor) -> SemiCanonicalEmbedding:
    C = build_cone_C(d)
    Cd = dual_cone(C)
    H = tuple(hilbert_basis(Cd))
    return SemiCanonicalEmbedding(d.lattice_rank, d.m, C, Cd, H)


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    point: Point | None = None
    u: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_admissible(coefficients: Sequence[Polyhedron], tailcone: Cone, line: Line) -> Admissibility:
    """Normality test: at each boundary point at most one coinciding support value is fractional.

    Checked on every degree, not just generators: on each cone where the
    relevant support functions are linear, fractional parts are periodic
    in the Hilbert-basis coordinates with period the common denominator.
    """
    if len(coefficients) != len(line.forms):
        raise ValueError("one coefficient per form is required")
    groups = [(q.param, q.indices) for q in line.boundary]
    return groups_admissible(coefficients, tailcone, groups)


def groups_admissible(coefficients: Sequence[Polyhedron], tailcone: Cone, groups) -> Admissibility:
    """``groups`` is a list of (label, indices) of coefficients sharing a point."""
    sigma_dual = dual_cone(tailcone)
    r = tailcone.ambient_rank
    for label, idx in groups:
        if len(idx) < 2 or any(coefficients[i].empty for i in idx):
            continue
        bad = _fractional_clash([coefficients[i] for i in idx], sigma_dual, r)
        if bad is not None:
            return Admissibility(False, label, bad)
    return Admissibility(True)


def _fractional_clash(polys: Sequence[Polyhedron], sigma_dual: Cone, r: int):
    found = []
    for choice in product(*(p.vertices for p in polys)):
        ineqs = []
        for p, w in zip(polys, choice):
            for w2 in p.vertices:
                if w2 != w:
                    ineqs.append(primitive([a - b for a, b in zip(w2, w)]))
        ineqs += list(sigma_dual.facets)
        K = Cone.from_inequalities(ineqs, r, sigma_dual.equations)
        if K.dim < sigma_dual.dim:
            continue
        gens = hilbert_basis(K) if K.rays else []
        L = 1
        for w in choice:
            for x in w:
                L = L * x.denominator // math.gcd(L, x.denominator)
        for coeffs in product(range(L), repeat=len(gens)):
            u = [sum(c * g[t] for c, g in zip(coeffs, gens)) for t in range(r)]
            nonint = sum(1 for w in choice if sum(a * b for a, b in zip(w, u)).denominator != 1)
            if nonint > 1:
                found.append(tuple(u))
    if not found:
        return None
    return min(found, key=lambda u: (sum(abs(x) for x in u), u))


def detect_toric(line: Line) -> bool:
    return len(line.boundary) == 2
