import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from semicanonical.polycore import (
    Cone,
    NotPointed,
    UnboundedBelow,
    Polyhedron,
    dual_cone,
    hilbert_basis,
    module_generators,
    support_value,
)

vec2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
vec3 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


def pointed_cones(vec, n=(2, 4)):
    return st.lists(vec, min_size=n[0], max_size=n[1]).map(
        lambda g: Cone.from_generators([x for x in g if any(x)] or [vec_one(len(g[0]))]))


def vec_one(d):
    return (1,) + (0,) * (d - 1)


def brute_irreducibles(c, bound):
    d = c.ambient_rank
    pts = [p for p in itertools.product(range(-bound, bound + 1), repeat=d) if any(p) and c.contains(p)]
    S = set(pts)
    out = []
    for p in pts:
        if not any(tuple(a - b for a, b in zip(p, q)) in S for q in pts):
            out.append(p)
    return sorted(out)


def test_d6_dual_rays_and_hilbert_basis():
    C = Cone.from_generators([(3, -2, -2), (-1, 2, 0), (-1, 0, 2)])
    D = dual_cone(C)
    assert sorted(D.rays) == [(2, 1, 1), (2, 1, 2), (2, 2, 1)]
    assert sorted(hilbert_basis(D)) == [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 2, 2)]


def test_two_dimensional_hilbert_basis():
    assert sorted(hilbert_basis(Cone.from_generators([(1, 0), (1, 2)]))) == [(1, 0), (1, 1), (1, 2)]


@given(pointed_cones(vec2))
@settings(max_examples=80, deadline=None)
def test_double_dual_identity_2d(c):
    assert dual_cone(dual_cone(c)).same_set(c)


@given(pointed_cones(vec3, (1, 5)))
@settings(max_examples=60, deadline=None)
def test_double_dual_identity_3d(c):
    assert dual_cone(dual_cone(c)).same_set(c)


@given(pointed_cones(vec3, (2, 4)))
@settings(max_examples=40, deadline=None)
def test_dual_membership_identity(c):
    D = dual_cone(c)
    for u in itertools.product(range(-2, 3), repeat=3):
        assert D.contains(u) == all(sum(a * b for a, b in zip(u, g)) >= 0 for g in c.rays + c.lineality
                                    + tuple(tuple(-x for x in l) for l in c.lineality))


@given(pointed_cones(vec2, (2, 3)))
@settings(max_examples=40, deadline=None)
def test_hilbert_basis_minimal_and_complete_2d(c):
    assume(c.is_pointed)
    hb = sorted(hilbert_basis(c))
    # every irreducible point of the box is in the basis, and basis elements inside the box are irreducible
    bound = 10
    brute = brute_irreducibles(c, bound)
    assert set(brute) <= set(hb)
    assert [h for h in hb if max(map(abs, h)) <= bound] == brute


@given(pointed_cones(st.tuples(st.integers(0, 3), st.integers(-2, 2), st.integers(-2, 2)), (3, 4)))
@settings(max_examples=15, deadline=None)
def test_hilbert_basis_minimal_and_complete_3d(c):
    assume(c.is_pointed and c.dim == 3)
    hb = sorted(hilbert_basis(c))
    bound = 6
    brute = brute_irreducibles(c, bound)
    assert set(brute) <= set(hb)
    assert [h for h in hb if max(map(abs, h)) <= bound] == brute


def test_hilbert_basis_rejects_lines():
    with pytest.raises(NotPointed):
        hilbert_basis(Cone.from_generators([(1, 0), (-1, 0), (0, 1)]))


@st.composite
def polyhedra(draw):
    verts = draw(st.lists(st.tuples(st.fractions(-3, 3, max_denominator=4), st.fractions(-3, 3, max_denominator=4)),
                          min_size=1, max_size=4))
    return Polyhedron.from_vertices(verts, Cone.from_generators([(1, 0), (1, 2)]))


@given(polyhedra(), st.tuples(st.integers(0, 5), st.integers(0, 5)), st.tuples(st.integers(0, 5), st.integers(0, 5)))
@settings(max_examples=80, deadline=None)
def test_support_superadditive(P, a, b):
    D = dual_cone(P.tailcone)
    assume(D.contains(a) and D.contains(b))
    s = tuple(x + y for x, y in zip(a, b))
    assert support_value(P, s) >= support_value(P, a) + support_value(P, b)
    assert support_value(P, (0, 0)) == 0


def test_support_unbounded_below():
    P = Polyhedron.from_vertices([(0, 0)], Cone.from_generators([(1, 0)]))
    with pytest.raises(UnboundedBelow):
        support_value(P, (-1, 0))


def test_module_generators_d6_polytope():
    C = Cone.from_generators([(2, 1, 1), (2, 1, 2), (2, 2, 1)])
    P = Polyhedron.from_vertices([(Fraction(2), Fraction(1), Fraction(1))], C)
    assert module_generators(P, C) == [(2, 1, 1)]


def test_polyhedron_lattice_points_square():
    P = Polyhedron.from_inequalities([(1, 0, 0), (0, 1, 0), (-1, 0, 2), (0, -1, 2)], 2)
    assert len(P.lattice_points()) == 9
    assert P.is_bounded


def test_cone_json_round_trip():
    c = Cone.from_generators([(1, 0, 0), (0, 1, 0), (0, -1, 0)])
    assert Cone.from_json(c.to_json()).same_set(c)
    assert not c.is_pointed
