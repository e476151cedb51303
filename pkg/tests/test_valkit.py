import random
from fractions import Fraction

import pytest
import sympy

from semicanonical.idealkit import GradedLaurentElement
from semicanonical.valkit import (
    HomogeneousValuation,
    NotABoundaryPoint,
    ZeroElement,
    generator_values,
    khovanskii_check,
    monomial_order,
    ord_at,
    value_semigroup,
    valuation_eval,
    weight_matrix_from_valuation,
)

FIG2_IN = [(2, -2), (2, -3), (3, -4), (4, -4), (4, -5), (4, -6)]
FIG2_OUT = [(1, -1), (3, -3)]


def sympy_order(line, q, terms):
    """Order in ``t`` of ``sum c z^v`` along ``s = q + t q'`` (independent oracle)."""
    t = sympy.Symbol("t")
    a, b = (sympy.Rational(x.numerator, x.denominator) for x in q)
    other = (0, 1) if a != 0 else (1, 0)
    s0, s1 = a + t * other[0], b + t * other[1]
    ls = [sympy.Rational(f0.numerator, f0.denominator) * s0 + sympy.Rational(f1.numerator, f1.denominator) * s1
          for f0, f1 in line.forms]
    expr = sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([(ls[i + 1] / ls[0]) ** k for i, k in enumerate(v)])
               for v, c in terms)
    num, den = sympy.fraction(sympy.together(expr))
    def low(p):
        P = sympy.Poly(sympy.expand(p), t)
        return min(m[0] for m in P.monoms())
    return low(num) - low(den)


def test_d6_generator_values(d6):
    val = d6.problem.valuation
    assert generator_values(d6.embedding, d6.line, val) == [(2, -2), (2, -3), (2, -3), (3, -4)]
    S = value_semigroup(d6.embedding, d6.line, d6.divisor, val)
    assert set(S.generators) == {(3, -4), (2, -3), (2, -2)}


def test_d6_value_semigroup_membership(d6):
    S = value_semigroup(d6.embedding, d6.line, d6.divisor, d6.problem.valuation)
    assert all(S.contains(p) for p in FIG2_IN)
    assert not any(S.contains(p) for p in FIG2_OUT)


def test_order_against_series(d6, pomega):
    rng = random.Random(7)
    for P in (d6, pomega):
        for q in [b.param for b in P.line.boundary] + [(Fraction(2), Fraction(3))]:
            for _ in range(6):
                terms = [(tuple(rng.randint(-2, 2) for _ in range(P.line.m)), Fraction(rng.randint(1, 3)))
                         for _ in range(rng.randint(1, 3))]
                merged = {}
                for v, c in terms:
                    merged[v] = merged.get(v, 0) + c
                terms = list(merged.items())
                assert ord_at(P.line, q, terms) == sympy_order(P.line, q, terms)


def test_valuation_axioms_on_monomial_pairs(d6, pomega):
    rng = random.Random(11)
    count = 0
    for P in (d6, pomega):
        val = P.problem.valuation
        m, r = P.line.m, P.divisor.lattice_rank
        for _ in range(250):
            u1 = tuple(rng.randint(0, 3) for _ in range(r))
            u2 = tuple(rng.randint(0, 3) for _ in range(r))
            v1 = tuple(rng.randint(-3, 3) for _ in range(m))
            v2 = tuple(rng.randint(-3, 3) for _ in range(m))
            a = GradedLaurentElement.from_dict(u1, {v1: 1})
            b = GradedLaurentElement.from_dict(u2, {v2: 1})
            ab = GradedLaurentElement.from_dict(tuple(x + y for x, y in zip(u1, u2)),
                                                {tuple(x + y for x, y in zip(v1, v2)): 1})
            va, vb = valuation_eval(val, a, P.line), valuation_eval(val, b, P.line)
            assert valuation_eval(val, ab, P.line) == tuple(x + y for x, y in zip(va, vb))
            if v1 != v2:
                s = GradedLaurentElement.from_dict(u1, {v1: 1, v2: rng.choice([1, -1, 2])})
                b1 = GradedLaurentElement.from_dict(u1, {v2: 1})
                vs, vb1 = valuation_eval(val, s, P.line), valuation_eval(val, b1, P.line)
                assert vs >= min(va, vb1)
                if va != vb1:
                    assert vs == min(va, vb1)
            count += 1
    assert count == 500


def test_zero_element_raises(d6):
    with pytest.raises(ZeroElement):
        valuation_eval(d6.problem.valuation, GradedLaurentElement((1,), ()), d6.line)
    # 1 + z1 + z2 vanishes identically on the line
    g = GradedLaurentElement.from_dict((0,), {(0, 0): 1, (1, 0): 1, (0, 1): 1})
    with pytest.raises(ZeroElement):
        valuation_eval(d6.problem.valuation, g, d6.line)


def test_non_boundary_point_rejected(d6):
    val = HomogeneousValuation(((1,), (0,)), (0, 1), point_param=(Fraction(2), Fraction(3)))
    with pytest.raises(NotABoundaryPoint):
        value_semigroup(d6.embedding, d6.line, d6.divisor, val)


@pytest.mark.parametrize("j", [0, 1, 2])
def test_khovanskii_d6(d6, j):
    val = HomogeneousValuation(((1,), (0,)), (0, 1), j)
    assert khovanskii_check(d6.embedding, d6.line, d6.divisor, val, 6).ok


def test_weight_matrix(d6):
    W, info = weight_matrix_from_valuation(d6.embedding, d6.line, d6.problem.valuation,
                                           d6.presentation)
    assert W.rows == ((2, 2, 2, 3), (-2, -3, -3, -4))
    assert info["in_trop"]
