import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from semicanonical.idealkit import (
    XPolynomial,
    dual_box,
    degree_slice,
    graded_piece,
    ideal_generators_IL,
    ideal_membership,
    ideals_equal,
    lift_to_polynomial,
    substitute,
    toric_ideal_generators,
)


def to_sympy(f, xs):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([x**k for x, k in zip(xs, a)])
               for a, c in f.terms)


def eliminated_toric_basis(H):
    """Reduced Groebner basis of the toric ideal by elimination (independent oracle)."""
    n, d = len(H), len(H[0])
    ts = sympy.symbols(f"t0:{d}")
    xs = sympy.symbols(f"x0:{n}")
    eqs = [x - sympy.prod([t**k for t, k in zip(ts, h)]) for x, h in zip(xs, H)]
    G = sympy.groebner(eqs, *ts, *xs, order="lex")
    keep = [g for g in G.exprs if not (g.free_symbols & set(ts))]
    return sympy.groebner(keep, *xs, order="grevlex"), xs


@pytest.mark.parametrize("H", [
    [(1, 0), (1, 1), (1, 2)],
    [(1, 0), (1, 1), (1, 3)],
    [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 2, 2)],
])
def test_toric_ideal_matches_elimination(H):
    ours = toric_ideal_generators(H, 6)
    ref, xs = eliminated_toric_basis(H)
    mine = sympy.groebner([to_sympy(f, xs) for f in ours], *xs, order="grevlex")
    assert mine.exprs == ref.exprs


def test_d6_presentation(d6):
    J = d6.presentation
    assert [g.pretty() for g in J.toric_generators] == ["-x1*x2*x3 + x4^2"]
    assert [g.pretty() for g in J.linear_lift_generators] == ["x1 + x2 + x3"]


def test_lift_round_trip(d6, pomega):
    for P in (d6, pomega):
        for g in ideal_generators_IL(P.embedding, P.line, P.divisor):
            f = lift_to_polynomial(g, P.embedding)
            r = P.embedding.rank_N
            assert substitute(f, P.embedding) == {g.degree + v: c for v, c in g.terms}


def test_d6_exactness(d6):
    for u in range(9):
        piece = graded_piece(d6.embedding, d6.line, d6.divisor, (u,))
        assert piece.exact, piece
    p = graded_piece(d6.embedding, d6.line, d6.divisor, (2,))
    assert (p.dim_AC, p.dim_IL, p.dim_AL) == (3, 1, 2)


def test_membership_basics():
    x = lambda *a: XPolynomial.monomial(a)
    f = x(1, 0) - x(0, 1)
    assert ideal_membership(x(2, 0) - x(1, 1), [f], 2)
    assert not ideal_membership(x(1, 0), [f], 3)
    assert ideal_membership(XPolynomial(2, ()), [f], 2)
    ok, wit = ideals_equal([f], [x(1, 0)], 2)
    assert not ok and wit == f


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=3),
       st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_membership_monotone_in_generators_and_bound(terms, bound):
    x = lambda *a: XPolynomial.monomial(a)
    gens = [x(1, 1) - x(2, 0)]
    f = XPolynomial.from_dict(2, {(a, b): Fraction(c) for a, b, c in terms})
    if f.degree > bound:
        return
    if ideal_membership(f, gens, bound):
        assert ideal_membership(f, gens + [x(0, 2)], bound)
        assert ideal_membership(f, gens, bound + 1)


def test_multiples_of_generators_are_members(d6):
    rng = random.Random(3)
    gens = d6.presentation.generators
    for _ in range(10):
        g = rng.choice(gens)
        mono = tuple(rng.randint(0, 1) for _ in range(4))
        h = g.shift(mono)
        assert ideal_membership(h, gens, max(h.degree, 2))


def test_empty_coefficient_graded_piece_raises(d6):
    from semicanonical.tgeom import PolyhedralDivisor, build_embedding, line_from_divisor
    d = PolyhedralDivisor.build([(1,)], [(0, 1), (1, 0), (1, 1)], [[(Fraction(1),)], None, [(Fraction(0),)]])
    with pytest.raises(ValueError):
        graded_piece(build_embedding(d), line_from_divisor(d), d, (1,))


def test_degree_slices(pomega):
    assert len(degree_slice(pomega.divisor, pomega.problem.grading, 1)) == 7
    assert dual_box(d6_dummy(), 2) == [(0,), (1,), (2,)]


def d6_dummy():
    from semicanonical.inputs import load_fixture
    return load_fixture("d6").divisor
