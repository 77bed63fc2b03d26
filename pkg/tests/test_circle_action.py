from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semifree.circle_action import (
    ALLOWED_WEIGHTS,
    POINT,
    SPHERE,
    CircleActionError,
    critical_values,
    fixed_components,
    poincare_polynomial,
    semifree_check,
    vertex_weights,
)
from semifree.fixtures import chopped_p1, chopped_p2, monotone_cube, product_cube, tilted_cube
from semifree.polytope import apply_unimodular, transform_circle
from strategies import unimodular

EPS = Fraction(1, 10)


def test_semifree_examples():
    assert semifree_check(chopped_p1(), (0, 1, 0)).ok
    assert semifree_check(product_cube(EPS), (1, 1, 0)).ok
    P = product_cube(EPS)
    rep = semifree_check(P, (2, 1, 0))
    assert not rep.ok
    assert {tuple(abs(x) for x in P.edges[k].direction) for k in rep.violators} == {(1, 0, 0)}
    assert len(rep.violators) == 4


def test_cube_has_four_fixed_spheres():
    comps = fixed_components(product_cube(EPS), (1, 1, 0))
    assert [c.kind for c in comps] == [SPHERE] * 4
    assert [c.level for c in comps] == [0, 1, 1 + EPS, 2 + EPS]
    assert all(c.size == 1 for c in comps)
    assert [c.extremal for c in comps] == [True, False, False, True]
    assert [c.index for c in comps] == [0, 1, 1, 2]


def test_p1_and_p2_have_one_index_one_sphere():
    for P in (chopped_p1(), chopped_p2()):
        (c,) = fixed_components(P, (0, 1, 0))
        assert (c.kind, c.level, c.index, c.size) == (SPHERE, 0, 1, 2)


def test_tilted_cube_isolated_points():
    comps = fixed_components(tilted_cube(), (1, 1, -1))
    assert all(c.kind == POINT for c in comps)
    assert sorted(c.level for c in comps) == [-2, 0, 0, 0, 2, 2, 2, 4]
    assert [c.index for c in comps if c.level == 2] == [2, 2, 2]
    assert [c.index for c in comps if c.level == 0] == [1, 1, 1]


def test_critical_values():
    assert critical_values(product_cube(EPS), (1, 1, 0)) == [0, 1, Fraction(11, 10), Fraction(21, 10)]
    assert critical_values(chopped_p1(), (0, 1, 0)) == [0]
    # a generic direction on a prism: only vertex levels appear
    assert critical_values(product_cube(EPS), (1, 1, 1)) == sorted(
        {v.point[0] + v.point[1] + v.point[2] for v in product_cube(EPS).vertices}
    )


def test_poincare_polynomial_of_cube():
    # three spheres: (1 + t^2)^3
    assert poincare_polynomial(tilted_cube(), (1, 1, -1)) == [1, 0, 3, 0, 3, 0, 1]


def test_non_primitive_circle_is_rejected():
    with pytest.raises(CircleActionError):
        fixed_components(product_cube(), (2, 2, 0))


def test_weights_at_a_vertex():
    P = tilted_cube()
    v = next(i for i, x in enumerate(P.vertices) if x.point == (2, 2, 0))
    assert sorted(vertex_weights(P, (1, 1, -1), v)) == [-1, -1, -1]


FIXTURES = [
    (product_cube(EPS), (1, 1, 0)),
    (tilted_cube(), (1, 1, -1)),
    (monotone_cube(), (1, 1, -1)),
    (monotone_cube(), (1, 1, 0)),
    (chopped_p1(), (0, 1, 0)),
    (chopped_p2(), (0, 1, 0)),
]


@pytest.mark.parametrize("P, xi", FIXTURES)
def test_weight_catalogue_and_extremal_signs(P, xi):
    for c in fixed_components(P, xi):
        assert tuple(sorted(c.weights)) in ALLOWED_WEIGHTS
        if c.extremal:
            signs = {w > 0 for w in c.weights if w != 0}
            assert len(signs) == 1
            if c.kind == POINT:
                assert 0 not in c.weights


@pytest.mark.parametrize("xi", [(1, 1, -1), (1, 1, 1), (-1, 1, 1)])
def test_monotone_weight_sum_rule(xi):
    points = [c for c in fixed_components(monotone_cube(), xi) if c.kind == POINT]
    assert len(points) == 8
    for c in points:
        assert c.level == -sum(c.weights)


@given(st.sampled_from(FIXTURES), unimodular())
def test_index_statistics_invariant_under_reparametrization(fixture, A):
    P, xi = fixture
    before = Counter((c.kind, c.level, c.index, c.size) for c in fixed_components(P, xi))
    Q = apply_unimodular(P, A)
    after = Counter((c.kind, c.level, c.index, c.size) for c in fixed_components(Q, transform_circle(xi, A)))
    assert before == after
    assert poincare_polynomial(P, xi) == poincare_polynomial(Q, transform_circle(xi, A))
