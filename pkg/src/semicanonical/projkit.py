"""Polarized layer: Newton-Okounkov polytopes and toric special fibers of test configurations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Sequence

from .exactla import det, format_rat, inverse, nullspace, rank, rational_solve
from .idealkit import XPolynomial, degree_slice, toric_ideal_generators
from .polycore import Polyhedron, dual_cone
from .tgeom import Line, PolyhedralDivisor, detect_toric, groups_admissible, check_admissible
from .tropkit import degenerate_line, trop_line


class EmptyBox(ValueError):
    pass


class NotInjective(ValueError):
    pass


@dataclass(frozen=True)
class PolarizedInput:
    """A divisor on ``N x Z`` together with the co-character giving the projective grading."""

    divisor: PolyhedralDivisor
    grading: tuple[int, ...]

    def __post_init__(self):
        if len(self.grading) != self.divisor.lattice_rank:
            raise ValueError("grading co-character has the wrong length")
        if not degree_slice(self.divisor, self.grading, 1):
            raise EmptyBox("degree-one slice of the dual tailcone has no lattice points")

    def deg(self, u: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.grading, u))

    def box(self) -> Polyhedron:
        """``{u in sigma_dual : <grading, u> = 1}``."""
        sd = dual_cone(self.divisor.tailcone)
        r = self.divisor.lattice_rank
        rows = [list(f) + [0] for f in sd.facets]
        eqs = [list(self.grading) + [-1]] + [list(q) + [0] for q in sd.equations]
        return Polyhedron.from_inequalities(rows, r, eqs)


def _vertex_tuples(polys):
    for choice in product(*(p.vertices for p in polys)):
        yield [sum(col) for col in zip(*choice)]


@dataclass(frozen=True)
class NOBody:
    """Pre-image polytope in ``(u, lambda)`` coordinates together with its image under ``rho``."""

    rank: int
    homogeneous_rows: tuple[tuple[Fraction, ...], ...]  # a.(u, lambda) >= 0
    grading: tuple[int, ...]
    polytope: Polyhedron
    psi: tuple[tuple[int, ...], ...]
    gamma: tuple[int, ...]

    @property
    def vertices(self) -> tuple:
        return self.polytope.vertices

    def rho(self, x: Sequence) -> tuple:
        u, lam = x[:-1], x[-1]
        return tuple(sum(a * b for a, b in zip(row, u)) + lam * g for row, g in zip(self.psi, self.gamma))

    @property
    def image_vertices(self) -> list[tuple]:
        return sorted(self.rho(v) for v in self.vertices)

    def inequalities(self) -> list[tuple]:
        return self.polytope.inequalities()

    def dilate(self, k: int) -> Polyhedron:
        eq = list(self.grading) + [0, -k]
        rows = [list(r) + [0] for r in self.homogeneous_rows]
        return Polyhedron.from_inequalities(rows, self.rank + 1, [eq])

    def lattice_count(self, k: int) -> int:
        return len(self.dilate(k).lattice_points())

    def to_json(self) -> dict:
        return {
            "inequalities": [[format_rat(x) for x in r] for r in self.inequalities()],
            "equations": [[format_rat(x) for x in r] for r in self.polytope.equations()],
            "vertices": [[format_rat(x) for x in v] for v in self.vertices],
            "image_vertices": [[format_rat(x) for x in v] for v in self.image_vertices],
        }


def nok_body(p: PolarizedInput, line: Line, j: int, psi: Sequence[Sequence[int]], gamma: Sequence[int]) -> NOBody:
    """``{(u, l) : u in Box, -Delta_j(u) <= l <= sum_{i != j} Delta_i(u)}`` with un-floored supports."""
    d = p.divisor
    r = d.lattice_rank
    if not 0 <= j < len(line.boundary):
        raise ValueError(f"no boundary point with index {j}")
    A = [list(row) + [g] for row, g in zip(psi, gamma)]
    if nullspace(A, r + 1):
        raise NotInjective("rho is not injective")
    if any(c.empty for c in d.coefficients):
        raise ValueError("Newton-Okounkov body needs nonempty coefficients")
    idx = set(line.boundary[j].indices)
    low = [d.coefficients[i] for i in sorted(idx)]
    high = [d.coefficients[i] for i in range(len(d.coefficients)) if i not in idx]
    rows = []
    for w in _vertex_tuples(low):
        rows.append(tuple(Fraction(x) for x in w) + (Fraction(1),))
    for w in (_vertex_tuples(high) if high else [[0] * r]):
        rows.append(tuple(Fraction(x) for x in w) + (Fraction(-1),))
    sig = d.tailcone
    for ray in sig.rays:
        rows.append(tuple(Fraction(x) for x in ray) + (Fraction(0),))
    eqs = [list(p.grading) + [0, -1]]
    for l in sig.lineality:
        eqs.append(list(l) + [0, 0])
    poly = Polyhedron.from_inequalities([list(x) + [0] for x in rows], r + 1, eqs)
    if poly.empty:
        raise EmptyBox("Newton-Okounkov body is empty")
    if not poly.is_bounded:
        raise ValueError("Newton-Okounkov body is unbounded")
    return NOBody(r, tuple(rows), tuple(p.grading), poly, tuple(tuple(x) for x in psi), tuple(gamma))


# -- semigroups of special fibers ---------------------------------------------------------


@dataclass(frozen=True)
class DegenerationFiber:
    label: str
    description: str
    generators: tuple[tuple[int, ...], ...] = ()
    ideal_generators: tuple[XPolynomial, ...] = ()
    normal: bool | None = None
    merged: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "semigroup": self.description,
            "generators": [list(g) for g in self.generators],
            "ideal_generators": [g.to_json() for g in self.ideal_generators],
            "normal": self.normal,
            "merged": list(self.merged),
        }


Bounds = Callable[[tuple], tuple]


def semigroup_generators(p: PolarizedInput, bounds: Bounds, degree_bound: int) -> list[tuple[int, ...]]:
    """Irreducible elements of ``{(u, l) : lo(u) <= l <= hi(u)}`` of degree at most the bound."""
    d = p.divisor
    if len(degree_slice(d, p.grading, 0)) != 1:
        raise ValueError("grading is not positive on the dual tailcone")
    sig = d.tailcone

    def member(u, lam) -> bool:
        if any(sum(a * b for a, b in zip(ray, u)) < 0 for ray in sig.rays):
            return False
        lo, hi = bounds(u)
        return lo <= lam <= hi

    elems: dict[int, list] = {}
    gens = []
    for k in range(1, degree_bound + 1):
        layer = []
        for u in degree_slice(d, p.grading, k):
            lo, hi = bounds(u)
            for lam in range(int(lo), int(hi) + 1):
                layer.append(tuple(u) + (lam,))
        elems[k] = layer
        for x in layer:
            reducible = False
            for k2 in range(1, k // 2 + 1):
                for y in elems[k2]:
                    z = tuple(a - b for a, b in zip(x, y))
                    if member(z[:-1], z[-1]):
                        reducible = True
                        break
                if reducible:
                    break
            if not reducible:
                gens.append(x)
    return sorted(gens)


def lattice_equivalent(s1: Sequence[Sequence[int]], s2: Sequence[Sequence[int]],
                       grading: Sequence[int] | None = None) -> bool:
    """Is there a unimodular map sending ``s1`` onto ``s2`` and preserving the grading?"""
    A1 = sorted(set(tuple(x) for x in s1))
    A2 = sorted(set(tuple(x) for x in s2))
    if len(A1) != len(A2):
        return False
    if not A1:
        return True
    k = len(A1[0])
    if len(A2[0]) != k:
        raise ValueError("ambient ranks differ")
    g = tuple(grading) if grading is not None else None
    deg = (lambda x: sum(a * b for a, b in zip(g, x))) if g is not None else (lambda x: 0)
    if sorted(map(deg, A1)) != sorted(map(deg, A2)):
        return False
    if rank(A1) != rank(A2):
        return False
    basis = []
    for x in A1:
        if rank(basis + [x]) > len(basis):
            basis.append(x)
    full = len(basis) == k
    # coordinates of every element of s1 in the chosen basis
    Bt = [[b[t] for b in basis] for t in range(k)]
    coords = [rational_solve(Bt, list(x)) for x in A1]
    target = set(A2)
    by_deg: dict = {}
    for y in A2:
        by_deg.setdefault(deg(y), []).append(y)

    def extend(chosen):
        i = len(chosen)
        if i == len(basis):
            return check(chosen)
        for y in by_deg.get(deg(basis[i]), []):
            if y in chosen:
                continue
            if rank(list(chosen) + [y]) <= i:
                continue
            if extend(chosen + [y]):
                return True
        return False

    def check(images) -> bool:
        out = set()
        for c in coords:
            img = tuple(sum(ci * im[t] for ci, im in zip(c, images)) for t in range(k))
            if any(Fraction(v).denominator != 1 for v in img):
                return False
            img = tuple(int(v) for v in img)
            if img not in target:
                return False
            out.add(img)
        if out != target:
            return False
        if full:
            Binv = inverse([list(b) for b in basis])  # rows: basis vectors
            # A sends basis[i] -> images[i]: A = Img^T (B^T)^{-1}
            M = [[sum(images[i][r] * Binv[c][i] for i in range(k)) for c in range(k)] for r in range(k)]
            if any(Fraction(x).denominator != 1 for row in M for x in row):
                return False
            if abs(det(M)) != 1:
                return False
        return True

    return extend([])


def _fiber_bounds(d: PolyhedralDivisor, idx: set[int] | None) -> Bounds:
    n = len(d.coefficients)

    def bounds(u):
        fl = d.floors(u)
        if idx is None:
            return 0, sum(fl)
        return -sum(fl[i] for i in idx), sum(fl[i] for i in range(n) if i not in idx)

    return bounds


def test_config_fibers(p: PolarizedInput, line: Line, degree_bound: int = 3,
                       toric_bound: int = 3) -> list[DegenerationFiber]:
    """Candidate toric special fibers, deduplicated up to grading-preserving lattice isomorphism."""
    d = p.divisor
    if line.m != d.m:
        raise ValueError("line and divisor have different m")
    grading = tuple(p.grading) + (0,)
    fibers = [DegenerationFiber("trivial", "X itself")]
    cands = []
    tl = trop_line(line)
    for j, q in enumerate(line.boundary):
        idx = set(q.indices)
        gens = semigroup_generators(p, _fiber_bounds(d, idx), degree_bound)
        Lw = degenerate_line(line, tl.rays[j])
        normal = bool(check_admissible(d.coefficients, d.tailcone, Lw))
        cands.append((f"S_{j}", f"-floor(Delta_{j}) <= v <= sum_(i!={j}) floor(Delta_i)", gens, normal))
    gens = semigroup_generators(p, _fiber_bounds(d, None), degree_bound)
    normal = bool(groups_admissible(d.coefficients, d.tailcone, [("interior", tuple(range(len(d.coefficients))))]))
    cands.append(("interior-point", "0 <= v <= sum_i floor(Delta_i)", gens, normal))

    reference = None
    if detect_toric(line):
        reference = cands[0][2]
    distinct: list[list] = []
    for label, desc, gens, normal in cands:
        if reference is not None and lattice_equivalent(gens, reference, grading):
            fibers[0] = DegenerationFiber("trivial", "X itself", merged=fibers[0].merged + (label,))
            continue
        for entry in distinct:
            if lattice_equivalent(gens, entry[2], grading):
                entry[4].append(label)
                break
        else:
            distinct.append([label, desc, gens, normal, []])
    for label, desc, gens, normal, merged in distinct:
        ideal = toric_ideal_generators(gens, toric_bound) if len(gens) > 1 else []
        fibers.append(DegenerationFiber(label, desc, tuple(gens), tuple(ideal), normal, tuple(merged)))
    return fibers


test_config_fibers.__test__ = False  # not a pytest test despite the name
