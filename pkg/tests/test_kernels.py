import itertools

import pytest
from hypothesis import given, settings, strategies as st

from semicanonical import _purekernels, kernels

ck = pytest.importorskip("semicanonical._ckernels")

row = st.lists(st.integers(-4, 4), min_size=3, max_size=3)


@given(st.lists(row, min_size=1, max_size=4), st.lists(st.integers(-3, 6), min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_box_points_parity(A, c):
    c = c[: len(A)]
    lo, hi = [-3, -2, -3], [3, 2, 1]
    assert ck.box_points(A, c, lo, hi) == _purekernels.box_points(A, c, lo, hi)


@given(st.lists(row, min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_irreducible_mask_parity(facets):
    cands = [p for p in itertools.product(range(-2, 4), repeat=3)
             if any(p) and all(sum(a * b for a, b in zip(f, p)) >= 0 for f in facets)]
    assert ck.irreducible_mask(cands, facets) == _purekernels.irreducible_mask(cands, facets)


def test_big_values_fall_back():
    big = 1 << 62
    assert kernels.box_points([[big]], [0], [0], [2]) == [(0,), (1,), (2,)]


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_backend_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SEMICANONICAL_PURE="1")
    r = subprocess.run([sys.executable, "-c", "import semicanonical; print(semicanonical.BACKEND)"],
                       env=env, capture_output=True, text=True)
    assert r.stdout.strip() == "python"


def test_fiber_enumerators_agree(pomega):
    from semicanonical.idealkit import Fibers, monomials_upto

    F = Fibers(pomega.embedding.hilbert_basis)
    for alpha in list(monomials_upto(F.n, 3))[::7]:
        b = F.image(alpha)
        assert F._suffix(0, b) == _purekernels.box_points(
            [r for t in range(F.dim) for r in ([h[t] for h in F.H], [-h[t] for h in F.H])],
            [v for t in range(F.dim) for v in (-b[t], b[t])],
            [0] * F.n, [sum(a * x for a, x in zip(F.omega, b)) // w for w in F.wdeg])
