"""Tropicalization, initial forms and the well-poisedness check.

Initial forms use the min convention: ``In_w(f)`` keeps the terms whose
exponent minimizes ``alpha . w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactla import dot, nullspace, primitive, rank
from .idealkit import (
    Fibers,
    IdealPresentation,
    XPolynomial,
    ideal_generators_IL,
    ideal_presentation,
    ideals_equal,
    lift_to_polynomial,
    line_generators,
)
from .tgeom import Line, PolyhedralDivisor, SemiCanonicalEmbedding


class NotInTropicalization(ValueError):
    """The weight produces a monomial initial form."""


@dataclass(frozen=True)
class TropicalLine:
    rays: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]  # lattice length of each ord table
    multiplicities: tuple[int, ...]  # forms vanishing at the boundary point

    def balanced(self) -> bool:
        m = len(self.rays[0]) if self.rays else 0
        return all(sum(w * r[t] for w, r in zip(self.weights, self.rays)) == 0 for t in range(m))

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "weights": list(self.weights),
                "multiplicities": list(self.multiplicities)}


def trop_line(line: Line) -> TropicalLine:
    rays, weights, mults = [], [], []
    for q in line.boundary:
        g = math.gcd(*q.ord) if any(q.ord) else 0
        if g == 0:
            raise ValueError("boundary point with zero ord table")
        rays.append(tuple(x // g for x in q.ord))
        weights.append(g)
        mults.append(q.multiplicity)
    t = TropicalLine(tuple(rays), tuple(weights), tuple(mults))
    if not t.balanced():
        raise ArithmeticError("tropical line is not balanced")
    return t


def phi(e: SemiCanonicalEmbedding, v: Sequence) -> tuple:
    """``v -> (<v, H_k>)_k``."""
    if len(v) != len(e.hilbert_basis[0]):
        raise ValueError("dimension mismatch")
    return tuple(dot(v, h) for h in e.hilbert_basis)


@dataclass(frozen=True)
class TropicalFan:
    ambient: int
    lineality: tuple[tuple, ...]
    cones: tuple[tuple, ...]  # one ray generator per maximal cone
    line_rays: tuple[tuple[int, ...], ...]

    @property
    def lineality_dim(self) -> int:
        return rank([list(l) for l in self.lineality]) if self.lineality else 0

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "lineality": [list(l) for l in self.lineality],
            "cones": [{"line_ray": list(r), "ray": list(c)} for r, c in zip(self.line_rays, self.cones)],
        }


def _v_of_ray(e: SemiCanonicalEmbedding, ray: Sequence[int]) -> tuple:
    return (0,) * e.rank_N + tuple(ray)


def trop_X(e: SemiCanonicalEmbedding, line: Line) -> TropicalFan:
    r = e.rank_N
    lin = tuple(phi(e, tuple(int(i == j) for j in range(r)) + (0,) * e.m) for i in range(r))
    tl = trop_line(line)
    cones = tuple(phi(e, _v_of_ray(e, ray)) for ray in tl.rays)
    return TropicalFan(e.n, lin, cones, tl.rays)


def initial_form(f: XPolynomial, w: Sequence) -> XPolynomial:
    if not f:
        return f
    if len(w) != f.nvars:
        raise ValueError("dimension mismatch")
    vals = [dot(a, w) for a, _ in f.terms]
    lo = min(vals)
    return XPolynomial(f.nvars, tuple(t for t, x in zip(f.terms, vals) if x == lo))


def degenerate_line(line: Line, vpart: Sequence[int]) -> Line:
    """Line cut out by the initial forms of the circuits of ``line`` at weight ``vpart`` on the z's."""
    m = line.m
    if len(vpart) != m:
        raise ValueError("dimension mismatch")
    wts = [0] + list(vpart)
    eqs = []
    for c in line.relations():
        support = [i for i, x in enumerate(c) if x]
        lo = min(wts[i] for i in support)
        keep = [i for i in support if wts[i] == lo]
        if len(keep) == 1:
            raise NotInTropicalization(f"weight {list(vpart)} gives a monomial initial form")
        eqs.append([c[i] if i in keep else 0 for i in range(m + 1)])
    if not eqs:
        return line
    basis = nullspace(eqs, m + 1)
    if len(basis) != 2:
        raise NotInTropicalization("initial forms do not cut out a line")
    p, q = basis
    return Line.from_forms([(p[i], q[i]) for i in range(m + 1)])


@dataclass(frozen=True)
class ConeReport:
    index: int
    ray: tuple[int, ...]
    weight: tuple
    initial_gens: tuple[XPolynomial, ...]
    match: bool
    witness: XPolynomial | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {
            "index": self.index,
            "ray": list(self.ray),
            "weight": [str(x) for x in self.weight],
            "initial_gens": [g.to_json() for g in self.initial_gens],
            "match": self.match,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class WellPoisedReport:
    cones: tuple[ConeReport, ...]
    degree_bound: int

    @property
    def well_poised(self) -> bool:
        return all(c.match for c in self.cones)

    @property
    def verdict(self) -> str:
        if self.well_poised:
            return f"well-poised (verified to degree {self.degree_bound})"
        bad = next(c for c in self.cones if not c.match)
        return f"not well-poised: cone {bad.index} fails"

    def to_json(self) -> dict:
        return {"cones": [c.to_json() for c in self.cones], "well_poised": self.well_poised,
                "degree_bound": self.degree_bound, "verdict": self.verdict}


def initial_presentation(J: IdealPresentation, w: Sequence) -> list[XPolynomial]:
    """Initial forms of the tropical basis (toric binomials are w-homogeneous on trop)."""
    return [initial_form(g, w) for g in J.generators]


def verify_well_poised(e: SemiCanonicalEmbedding, line: Line, d: PolyhedralDivisor, degree_bound: int = 6,
                       presentation: IdealPresentation | None = None) -> WellPoisedReport:
    """Compare ``In_w J(L)`` with ``J(L_w)`` for one interior weight per maximal cone."""
    J = presentation or ideal_presentation(e, line, d, degree_bound)
    if degree_bound < max((g.degree for g in J.generators), default=0):
        raise ValueError("degree_bound below the generator degrees")
    F = Fibers(e.hilbert_basis)
    tl = trop_line(line)
    reports = []
    for j, ray in enumerate(tl.rays):
        w = phi(e, _v_of_ray(e, ray))
        G1 = initial_presentation(J, w)
        mono = next((g for g in G1 if g.is_monomial), None)
        if mono is not None:
            reports.append(ConeReport(j, ray, w, tuple(G1), False, mono, "monomial initial form"))
            continue
        Lw = degenerate_line(line, ray)
        lifts = [lift_to_polynomial(g, e, F) for g in ideal_generators_IL(e, Lw, d)]
        G2 = list(J.toric_generators) + lifts
        ok, wit = ideals_equal(G1, G2, degree_bound)
        reports.append(ConeReport(j, ray, w, tuple(G1), ok, wit, "" if ok else "initial ideal differs from J(L_w)"))
    return WellPoisedReport(tuple(reports), degree_bound)


def verify_custom_embedding(degrees: Sequence[Sequence[int]], rank_N: int, gens: Sequence[XPolynomial],
                            line: Line) -> WellPoisedReport:
    """Primality screen for a hand-supplied embedding.

    Each variable carries its lattice degree, so the cones of the
    tropicalization are still indexed by the rays of ``trop(L)``. An
    initial form that is a monomial, or that has a nontrivial monomial
    factor while being the only generator of a principal ideal, is a
    witness that the initial ideal is not prime.
    """
    e = SemiCanonicalEmbedding.from_columns(degrees, rank_N)
    tl = trop_line(line)
    reports = []
    for j, ray in enumerate(tl.rays):
        w = phi(e, _v_of_ray(e, ray))
        G1 = [initial_form(g, w) for g in gens]
        bad, reason = None, ""
        for g in G1:
            if g.is_monomial:
                bad, reason = g, "monomial initial form"
                break
            if len(G1) == 1 and any(g.monomial_content()):
                bad, reason = g, "initial form has a monomial factor: not prime"
                break
        reports.append(ConeReport(j, ray, w, tuple(G1), bad is None, bad, reason))
    return WellPoisedReport(tuple(reports), max((g.degree for g in gens), default=0))


@dataclass(frozen=True)
class WeightMatrix:
    rows: tuple[tuple, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def column(self, k: int) -> tuple:
        return tuple(r[k] for r in self.rows)

    def to_json(self) -> dict:
        return {"rows": [[str(x) for x in r] for r in self.rows]}


def iterated_initial(gens: Sequence[XPolynomial], W: WeightMatrix | Sequence[Sequence]) -> tuple[list[XPolynomial], bool]:
    """Apply ``In_{R_1}``, then ``In_{R_2}``, ... to a fixed generating set.

    Returns the final forms and whether some intermediate form became a
    monomial (the weight is then outside ``trop^r``).
    """
    rows = W.rows if isinstance(W, WeightMatrix) else tuple(tuple(r) for r in W)
    cur = list(gens)
    monomial = False
    for row in rows:
        if len(row) != (cur[0].nvars if cur else len(row)):
            raise ValueError("weight row length differs from the number of variables")
        cur = [initial_form(g, row) for g in cur]
        if any(g.is_monomial for g in cur):
            monomial = True
    return cur, monomial
