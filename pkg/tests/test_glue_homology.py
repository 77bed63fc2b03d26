from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from semifree.glue_homology import (
    MINUS,
    PLUS,
    SPHERE_CLASS,
    GluingError,
    GluingProblem,
    classes_equal,
    glued_class,
    hirzebruch_euler_rigidity,
    mv_presentation,
    product_gluing,
    side_kernel_rank,
)
from strategies import unimodular

I2 = ((1, 0), (0, 1))


def test_swap_gluing_separates_the_spheres():
    pres = mv_presentation(product_gluing(swap=True))
    assert pres.describe() == "Z^3"
    assert not classes_equal(pres, (MINUS, SPHERE_CLASS), (PLUS, SPHERE_CLASS))
    # the swap identifies the sphere below with the other factor above
    assert classes_equal(pres, (MINUS, SPHERE_CLASS), (PLUS, (1, 0)))


def test_identity_gluing_identifies_the_spheres():
    pres = mv_presentation(product_gluing(swap=False))
    assert pres.describe() == "Z^3"
    assert classes_equal(pres, (MINUS, SPHERE_CLASS), (PLUS, SPHERE_CLASS))
    assert glued_class(pres, MINUS, SPHERE_CLASS) == glued_class(pres, PLUS, SPHERE_CLASS)


def test_zero_inclusions_give_a_direct_sum():
    Z = ((0, 0), (0, 0))
    pres = mv_presentation(GluingProblem(2, Z, Z, I2, free_rank=1))
    assert pres.rank == 5 and pres.invariant_factors == ()
    assert not classes_equal(pres, (MINUS, (1, 0)), (PLUS, (1, 0)))


def test_torsion_appears_when_the_middle_wraps():
    pres = mv_presentation(GluingProblem(1, ((2,),), (), ((1,),)))
    assert pres.describe() == "Z/2"
    assert glued_class(pres, MINUS, (1,)) != glued_class(pres, MINUS, (0,))
    assert classes_equal(pres, (MINUS, (2,)), (MINUS, (0,)))


def test_injectivity_of_the_product_inclusions():
    for swap in (True, False):
        pres = mv_presentation(product_gluing(swap))
        assert side_kernel_rank(pres, MINUS) == 0 and side_kernel_rank(pres, PLUS) == 0


def test_malformed_problems():
    with pytest.raises(GluingError):
        GluingProblem(2, I2, I2, ((2, 0), (0, 1)))
    with pytest.raises(GluingError):
        GluingProblem(2, ((1,),), I2, I2)
    pres = mv_presentation(product_gluing(True))
    with pytest.raises(GluingError):
        glued_class(pres, MINUS, (1, 0, 0))
    with pytest.raises(GluingError):
        glued_class(pres, "middle", (1, 0))


@pytest.mark.parametrize("k", range(11))
def test_hirzebruch_rigidity(k):
    cert = hirzebruch_euler_rigidity(k)
    assert cert.forced_zero and cert.solutions == {0}


# -- properties ---------------------------------------------------------------

_entry = st.integers(-3, 3)


@st.composite
def problems(draw):
    r = draw(st.integers(1, 3))
    m, n = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    rows = lambda k: tuple(tuple(draw(_entry) for _ in range(r)) for _ in range(k))  # noqa: E731
    return GluingProblem(r, rows(m), rows(n), tuple(map(tuple, draw(unimodular(r, steps=3)))), free_rank=1)


def _torsion_and_rank(K):
    """Rank and determinantal divisor of an integer matrix via minors."""
    rows, cols = len(K), len(K[0])
    for r in range(min(rows, cols), 0, -1):
        g = 0
        for R in itertools.combinations(range(rows), r):
            for C in itertools.combinations(range(cols), r):
                g = math.gcd(g, oracles.det([[K[i][j] for j in C] for i in R]))
        if g:
            return r, g
    return 0, 1


@given(problems())
def test_presentation_matches_determinantal_divisors(p):
    pres = mv_presentation(p)
    r, g = _torsion_and_rank(p.difference_map())
    assert pres.rank == p.rank_minus + p.rank_plus - r + p.free_rank
    assert math.prod(pres.invariant_factors) == g


def _side_class(draw, p):
    side = draw(st.sampled_from([MINUS, PLUS]))
    n = p.rank_minus if side == MINUS else p.rank_plus
    return side, tuple(draw(st.integers(-2, 2)) for _ in range(n))


@given(problems(), st.data())
def test_class_equality_is_an_equivalence_relation(p, data):
    pres = mv_presentation(p)
    x, y, z = (_side_class(data.draw, p) for _ in range(3))
    assert classes_equal(pres, x, x)
    assert classes_equal(pres, x, y) == classes_equal(pres, y, x)
    if classes_equal(pres, x, y) and classes_equal(pres, y, z):
        assert classes_equal(pres, x, z)
    assert classes_equal(pres, x, y) == (glued_class(pres, *x) == glued_class(pres, *y))


@given(problems(), st.data())
def test_change_of_middle_basis_changes_nothing(p, data):
    B = data.draw(unimodular(p.rank_u, steps=3))
    q = p.rebased(B)
    a, b = mv_presentation(p), mv_presentation(q)
    assert (a.invariant_factors, a.rank) == (b.invariant_factors, b.rank)
    x, y = _side_class(data.draw, p), _side_class(data.draw, p)
    assert classes_equal(a, x, y) == classes_equal(b, x, y)
