"""Rational polyhedral cones and polyhedra with exact arithmetic.

Cones are stored canonically: primitive integer rays sorted
lexicographically, a Hermite-reduced lineality basis, and the dual data
(facet normals and equations) computed once by double description.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from . import kernels
from .exactla import (
    dot,
    format_rat,
    hermite_normal_form,
    hnf_basis,
    integer_kernel,
    parse_rat,
    primitive,
    rank,
    rational_solve,
    transpose,
)

INF = math.inf

IntVec = tuple[int, ...]


class UnboundedBelow(ValueError):
    """The support function is -infinity: ``u`` pairs negatively with the tailcone."""


class NotPointed(ValueError):
    pass


def _project_off(vecs: list[list[int]], lin: list[Sequence[int]]) -> list[IntVec]:
    """Project integer vectors onto the orthogonal complement of ``lin``."""
    if not lin:
        return [primitive(v) for v in vecs]
    # Gram-Schmidt over Q on the lineality basis
    ortho: list[list[Fraction]] = []
    for l in lin:
        w = [Fraction(x) for x in l]
        for o in ortho:
            c = dot(w, o) / dot(o, o)
            w = [a - c * b for a, b in zip(w, o)]
        if any(w):
            ortho.append(w)
    out = []
    for v in vecs:
        w = [Fraction(x) for x in v]
        for o in ortho:
            c = dot(w, o) / dot(o, o)
            w = [a - c * b for a, b in zip(w, o)]
        out.append(primitive(w))
    return out


def double_description(constraints: Iterable[Sequence[int]], d: int) -> tuple[list[IntVec], list[IntVec]]:
    """Extreme rays and lineality basis of ``{x in Q^d : a.x >= 0 for all a}``.

    Incremental double description with the algebraic adjacency test.
    Rays are canonical: primitive, orthogonal to the lineality space and
    sorted; the lineality basis is in Hermite normal form.
    """
    lin: list[list[int]] = [[int(i == j) for j in range(d)] for i in range(d)]
    rays: list[list[int]] = []
    processed: list[list[int]] = []
    for a in constraints:
        a = [int(x) for x in a]
        if not any(a):
            continue
        k = next((i for i, l in enumerate(lin) if dot(a, l) != 0), None)
        if k is not None:
            l0 = lin.pop(k)
            s = dot(a, l0)
            if s < 0:
                l0 = [-x for x in l0]
                s = -s
            lin = [list(primitive([s * x - dot(a, l) * y for x, y in zip(l, l0)])) for l in lin]
            lin = [l for l in lin if any(l)]
            rays = [list(primitive([s * x - dot(a, r) * y for x, y in zip(r, l0)])) for r in rays]
            rays.append(list(primitive(l0)))
            processed.append(a)
            continue
        vals = [dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zer = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        posv = [(r, v) for r, v in zip(rays, vals) if v > 0]
        new = pos + zer
        if neg and posv:
            target = d - len(lin) - 2
            tight = {id(r): {i for i, b in enumerate(processed) if dot(b, r) == 0} for r in rays}
            for p, vp in posv:
                zp = tight[id(p)]
                for n, vn in neg:
                    common = zp & tight[id(n)]
                    if len(common) < target:
                        continue
                    if rank([processed[i] for i in common]) != target:
                        continue
                    new.append(list(primitive([vp * x - vn * y for x, y in zip(n, p)])))
        seen = set()
        rays = []
        for r in new:
            t = tuple(r)
            if any(t) and t not in seen:
                seen.add(t)
                rays.append(r)
        processed.append(a)
    lin_basis = hnf_basis(lin)
    canon = sorted(set(_project_off(rays, lin_basis)))
    return [r for r in canon if any(r)], lin_basis


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone in Q^d.

    ``rays`` are the extreme rays of the pointed part (orthogonal to the
    lineality space); ``facets`` are inward normals relative to the linear
    span, ``equations`` cut out that span.
    """

    ambient_rank: int
    rays: tuple[IntVec, ...]
    lineality: tuple[IntVec, ...] = ()
    facets: tuple[IntVec, ...] = field(default=(), compare=False)
    equations: tuple[IntVec, ...] = field(default=(), compare=False)

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], ambient_rank: int | None = None) -> "Cone":
        gens = [primitive(g) for g in gens]
        gens = [g for g in gens if any(g)]
        d = ambient_rank if ambient_rank is not None else len(gens[0])
        facets, eqs = double_description(gens, d)
        ineqs = list(facets) + list(eqs) + [tuple(-x for x in e) for e in eqs]
        rays, lin = double_description(ineqs, d)
        return cls(d, tuple(rays), tuple(lin), tuple(facets), tuple(eqs))

    @classmethod
    def from_inequalities(
        cls, ineqs: Iterable[Sequence], ambient_rank: int, equations: Iterable[Sequence] = ()
    ) -> "Cone":
        ineqs = [primitive(a) for a in ineqs]
        eqs = [primitive(e) for e in equations]
        allc = ineqs + eqs + [tuple(-x for x in e) for e in eqs]
        rays, lin = double_description(allc, ambient_rank)
        gens = list(rays) + list(lin) + [tuple(-x for x in l) for l in lin]
        facets, deqs = double_description(gens, ambient_rank)
        return cls(ambient_rank, tuple(rays), tuple(lin), tuple(facets), tuple(deqs))

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @cached_property
    def dim(self) -> int:
        return rank(list(self.rays) + list(self.lineality)) if (self.rays or self.lineality) else 0

    def contains(self, x: Sequence) -> bool:
        return all(dot(f, x) >= 0 for f in self.facets) and all(dot(e, x) == 0 for e in self.equations)

    def interior_vector(self) -> IntVec:
        """A vector in the relative interior (sum of rays)."""
        return tuple(sum(col) for col in zip(*self.rays)) if self.rays else (0,) * self.ambient_rank

    def same_set(self, other: "Cone") -> bool:
        return self.rays == other.rays and self.lineality == other.lineality

    def to_json(self) -> dict:
        out = {"rays": [list(r) for r in self.rays], "facets": [list(f) for f in self.facets]}
        if self.lineality:
            out["lineality"] = [list(l) for l in self.lineality]
        if self.equations:
            out["equations"] = [list(e) for e in self.equations]
        return out

    @classmethod
    def from_json(cls, data: dict, ambient_rank: int | None = None) -> "Cone":
        gens = [tuple(r) for r in data["rays"]]
        lin = [tuple(l) for l in data.get("lineality", [])]
        allg = gens + lin + [tuple(-x for x in l) for l in lin]
        d = ambient_rank if ambient_rank is not None else len((gens or lin)[0])
        return cls.from_generators(allg, d) if allg else cls.zero(d)

    @classmethod
    def zero(cls, d: int) -> "Cone":
        eqs = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
        return cls(d, (), (), (), eqs)


def dual_cone(c: Cone) -> Cone:
    """``{u : <u, g> >= 0 for all g in c}`` with both representations filled."""
    return Cone(c.ambient_rank, c.facets, c.equations, c.rays, c.lineality)


def _lattice_basis(vecs: Sequence[Sequence[int]], d: int) -> list[IntVec]:
    """Basis of Z^d intersected with the span of ``vecs``."""
    perp = integer_kernel([list(v) for v in vecs], d)
    if not perp:
        return [tuple(int(i == j) for j in range(d)) for i in range(d)]
    return integer_kernel([list(p) for p in perp], d)


def parallelepiped_points(gens: Sequence[IntVec]) -> list[IntVec]:
    """Lattice points of the half-open parallelepiped spanned by independent ``gens``."""
    k = len(gens)
    d = len(gens[0])
    B = _lattice_basis(gens, d)
    Bt = transpose([list(b) for b in B])
    T = []
    for g in gens:
        coords = rational_solve(Bt, list(g))
        T.append([int(x) for x in coords])
    Ht, _ = hermite_normal_form(T)
    diag = [Ht[i][i] for i in range(k)]
    # lambda = c T^{-1}; solve row system lambda T = c
    Tt = transpose(T)
    out = []
    for c in product(*(range(h) for h in diag)):
        lam = rational_solve(Tt, list(c))
        frac = [x - math.floor(x) for x in lam]
        pt = [sum(f * g[j] for f, g in zip(frac, gens)) for j in range(d)]
        out.append(tuple(int(x) for x in pt))
    return out


def triangulate(rays: Sequence[IntVec]) -> list[tuple[int, ...]]:
    """Pulling triangulation of a pointed cone into simplicial cones.

    Returns index tuples into ``rays``; the union of the simplices is the
    cone and distinct simplices meet in common faces.
    """
    idx = list(range(len(rays)))
    return _triangulate(rays, idx)


def _triangulate(rays: Sequence[IntVec], idx: list[int]) -> list[tuple[int, ...]]:
    sub = [rays[i] for i in idx]
    if len(idx) == rank(sub):
        return [tuple(idx)]
    cone = Cone.from_generators(sub, len(rays[0]))
    r0 = idx[0]
    out = []
    for f in cone.facets:
        if dot(f, rays[r0]) > 0:
            face = [i for i in idx if dot(f, rays[i]) == 0]
            for s in _triangulate(rays, face):
                out.append((r0,) + s)
    return out


def hilbert_basis(c: Cone) -> list[IntVec]:
    """Minimal generating set of the semigroup ``c`` meet ``Z^d``, sorted."""
    if not c.is_pointed:
        raise NotPointed("Hilbert basis requires a pointed cone")
    if not c.rays:
        return []
    cands: set[IntVec] = set(c.rays)
    for simplex in triangulate(c.rays):
        for p in parallelepiped_points([c.rays[i] for i in simplex]):
            if any(p):
                cands.add(p)
    cl = sorted(cands)
    mask = kernels.irreducible_mask(cl, list(c.facets))
    return [x for x, keep in zip(cl, mask) if keep]


@dataclass(frozen=True)
class Polyhedron:
    """Vertices plus a tailcone; ``empty`` marks the empty polyhedron."""

    ambient_rank: int
    vertices: tuple[tuple[Fraction, ...], ...]
    tailcone: Cone
    empty: bool = False

    @classmethod
    def empty_set(cls, tailcone: Cone) -> "Polyhedron":
        return cls(tailcone.ambient_rank, (), tailcone, True)

    @classmethod
    def from_vertices(cls, vertices: Iterable[Sequence], tailcone: Cone) -> "Polyhedron":
        verts = [tuple(Fraction(x) for x in v) for v in vertices]
        d = tailcone.ambient_rank
        if not verts:
            return cls.empty_set(tailcone)
        gens = [primitive(list(v) + [1]) for v in verts]
        gens += [tuple(r) + (0,) for r in tailcone.rays]
        for l in tailcone.lineality:
            gens += [tuple(l) + (0,), tuple(-x for x in l) + (0,)]
        hom = Cone.from_generators(gens, d + 1)
        return cls._from_homogenized(hom, d, tailcone)

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[Sequence], ambient_rank: int, equations: Iterable[Sequence] = ()) -> "Polyhedron":
        """Rows ``(a, c)`` encode ``a.x + c >= 0`` (equations: ``= 0``)."""
        d = ambient_rank
        rows = [tuple(Fraction(x) for x in r) for r in ineqs]
        rows.append(tuple([Fraction(0)] * d + [Fraction(1)]))
        hom = Cone.from_inequalities(rows, d + 1, [tuple(Fraction(x) for x in e) for e in equations])
        tail_gens = [r[:d] for r in hom.rays if r[d] == 0]
        tail_lin = [l[:d] for l in hom.lineality]
        allg = tail_gens + tail_lin + [tuple(-x for x in l) for l in tail_lin]
        tail = Cone.from_generators(allg, d) if allg else Cone.zero(d)
        return cls._from_homogenized(hom, d, tail)

    @classmethod
    def _from_homogenized(cls, hom: Cone, d: int, tail: Cone) -> "Polyhedron":
        verts = sorted(tuple(Fraction(x, r[d]) for x in r[:d]) for r in hom.rays if r[d] > 0)
        if not verts:
            return cls.empty_set(tail)
        return cls(d, tuple(verts), tail, False)

    def inequalities(self) -> list[tuple[Fraction, ...]]:
        """Irredundant H-representation rows ``(a, c)`` with ``a.x + c >= 0``."""
        if self.empty:
            raise ValueError("empty polyhedron has no canonical inequalities")
        hom = self.homogenization()
        d = self.ambient_rank
        return [tuple(Fraction(x) for x in f) for f in hom.facets if any(f[:d])]

    def equations(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(x) for x in e) for e in self.homogenization().equations]

    def homogenization(self) -> Cone:
        d = self.ambient_rank
        gens = [primitive(list(v) + [1]) for v in self.vertices]
        gens += [tuple(r) + (0,) for r in self.tailcone.rays]
        for l in self.tailcone.lineality:
            gens += [tuple(l) + (0,), tuple(-x for x in l) + (0,)]
        return Cone.from_generators(gens, d + 1)

    @property
    def is_bounded(self) -> bool:
        return not self.empty and not self.tailcone.rays and not self.tailcone.lineality

    def contains(self, x: Sequence) -> bool:
        if self.empty:
            return False
        hom = self.homogenization()
        return hom.contains(list(x) + [1])

    def lattice_points(self) -> list[IntVec]:
        """Integer points of a bounded polyhedron (bounding box enumeration)."""
        if self.empty:
            return []
        if not self.is_bounded:
            raise ValueError("lattice_points needs a bounded polyhedron")
        d = self.ambient_rank
        lo = [math.ceil(min(v[i] for v in self.vertices)) for i in range(d)]
        hi = [math.floor(max(v[i] for v in self.vertices)) for i in range(d)]
        hom = self.homogenization()
        A = [list(f[:d]) for f in hom.facets]
        c = [f[d] for f in hom.facets]
        for e in hom.equations:
            A += [list(e[:d]), [-x for x in e[:d]]]
            c += [e[d], -e[d]]
        return kernels.box_points(A, c, lo, hi)

    def to_json(self) -> dict:
        return {
            "vertices": [[format_rat(x) for x in v] for v in self.vertices],
            "tailcone": self.tailcone.to_json(),
            "empty": self.empty,
        }

    @classmethod
    def from_json(cls, data: dict, ambient_rank: int) -> "Polyhedron":
        tail = Cone.from_json(data["tailcone"], ambient_rank) if data["tailcone"].get("rays") or data["tailcone"].get("lineality") else Cone.zero(ambient_rank)
        if data.get("empty"):
            return cls.empty_set(tail)
        return cls.from_vertices([[parse_rat(x) for x in v] for v in data["vertices"]], tail)


def support_value(p: Polyhedron, u: Sequence) -> Fraction | float:
    """``min_{v in p} <v, u>``; ``INF`` for the empty polyhedron."""
    if p.empty:
        return INF
    t = p.tailcone
    if any(dot(r, u) < 0 for r in t.rays) or any(dot(l, u) != 0 for l in t.lineality):
        raise UnboundedBelow(f"support function unbounded below at u={list(u)}")
    return min(Fraction(dot(v, u)) for v in p.vertices)


def module_generators(P: Polyhedron, c_dual: Cone) -> list[IntVec]:
    """Minimal lattice points ``G`` of ``P`` with ``P cap Z^d = G + (c_dual cap Z^d)``.

    Taken from the Hilbert basis of the cone over ``P x {1}``: the elements
    at height one.
    """
    if P.empty:
        return []
    if not P.tailcone.same_set(c_dual):
        raise ValueError("polyhedron tailcone differs from the given cone")
    hom = P.homogenization()
    d = P.ambient_rank
    return sorted(h[:d] for h in hilbert_basis(hom) if h[d] == 1)
