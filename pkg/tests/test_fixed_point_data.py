from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semifree.circle_action import fixed_components
from semifree.fixed_point_data import (
    DIFFERENT,
    FULL,
    MODES,
    SAME,
    SMALL,
    STAR_SMALL,
    FpdError,
    all_normal_bundle_checks,
    compare_fpd,
    extract_fpd,
    fpd_from_components,
    merge_germs,
    monotone_check,
    normal_bundle_consistency,
    normal_bundle_rule,
    synthetic_fpd,
)
from semifree.fixtures import chopped_p1, chopped_p2, monotone_cube, product_cube, tilted_cube
from semifree.morse_wall import cross_level
from semifree.polytope import apply_unimodular, transform_circle
from strategies import unimodular

EPS = Fraction(1, 10)
Y = (0, 1, 0)


@pytest.fixture(scope="module")
def p1_p2():
    return extract_fpd(chopped_p1(), Y, "M1"), extract_fpd(chopped_p2(), Y, "M2")


def test_open_polytopes_carry_one_fixed_sphere(p1_p2):
    for d in p1_p2:
        (level,) = d.levels
        (c,) = level.components
        assert level.level == 0 and not level.extremal
        assert (c.dim, c.index, c.size, c.self_intersection) == (2, 1, 2, 0)
    a, b = p1_p2
    assert a.levels[0].components[0].size == b.levels[0].components[0].size


def test_comparison_modes_on_the_open_polytopes(p1_p2):
    a, b = p1_p2
    assert compare_fpd(a, b, STAR_SMALL).verdict == SAME
    assert compare_fpd(a, b, SMALL).verdict == SAME
    full = compare_fpd(a, b, FULL)
    assert full.verdict == DIFFERENT and full.reasons == ("e-minus",)


def test_levels_must_match(p1_p2):
    cube = extract_fpd(product_cube(EPS), (1, 1, 0))
    for mode in MODES:
        rep = compare_fpd(p1_p2[0], cube, mode)
        assert rep.verdict == DIFFERENT and rep.reasons == ("level",)
    with pytest.raises(FpdError):
        compare_fpd(cube, cube, "medium")


def test_cube_record_and_germs():
    d = extract_fpd(product_cube(EPS), (1, 1, 0))
    assert d.critical_values == (0, 1, 1 + EPS, 2 + EPS)
    assert [l.extremal for l in d.levels] == [True, False, False, True]
    assert d.levels[0].components[0].normal_degrees is not None
    merged = merge_germs(d, d, (1 + EPS / 2, 1 + EPS / 2))
    assert compare_fpd(merged, d, FULL).same
    with pytest.raises(FpdError):
        merge_germs(d, d, (Fraction(1, 2), Fraction(3, 2)))


def test_extremal_surface_invariants():
    d = extract_fpd(product_cube(EPS), (0, 0, 1))
    lo, hi = d.levels
    assert lo.extremal_dim == hi.extremal_dim == 4
    assert lo.extremal_surface.diffeo_type == "S2xS2"
    assert lo.extremal_surface.form == hi.extremal_surface.form


# -- monotone constraints -----------------------------------------------------

MONOTONE = [
    fpd_from_components(fixed_components(monotone_cube(), xi)) for xi in [(1, 1, -1), (1, 1, 0), (1, 0, 0)]
]


def test_monotone_fixtures_pass():
    for d in MONOTONE:
        assert monotone_check(d).ok
    # CP2#3 at the middle: three points on each side of the surfaces
    d = synthetic_fpd([(-2, 2, (0, 1, 1)), (0, 2, (-1, 0, 1)), (0, 2, (-1, 0, 1)), (2, 2, (-1, -1, 0))])
    assert monotone_check(d).ok


def test_monotone_mutations_fail_with_matching_reasons():
    wrong_level = synthetic_fpd([(-3, 0, (1, 1, 1)), (-1, 0, (-1, 1, 1)), (1, 2, (-1, 0, 1)), (3, 0, (-1, -1, -1))])
    assert monotone_check(wrong_level).reasons == ("surface-level",)
    wrong_sum = synthetic_fpd([(-3, 0, (1, 1, 1)), (-1, 0, (-1, 1, 2)), (3, 0, (-1, -1, -1))])
    assert monotone_check(wrong_sum).reasons == ("weight-sum",)
    # fixed surfaces in dimension eight can have index 1 or 2
    base = [(-3, 2, (0, 1, 1, 1)), (0, 2, (-1, 0, 1, 1)), (0, 2, (-1, 0, 1, 1)), (3, 2, (-1, -1, -1, 0))]
    assert monotone_check(synthetic_fpd(base)).ok
    mixed = base[:2] + [(0, 2, (-1, -1, 0, 1))] + base[3:]
    assert monotone_check(synthetic_fpd(mixed)).reasons == ("surface-index",)
    isolated = synthetic_fpd([(-3, 0, (1, 1, 1)), (2, 0, (-1, -2, 1)), (3, 0, (-1, -1, -1))])
    assert monotone_check(isolated).reasons == ("isolated-level",)


# -- normal bundles -----------------------------------------------------------


@pytest.mark.parametrize(
    "P, xi",
    [(product_cube(EPS), (1, 1, 0)), (chopped_p1(), Y), (chopped_p2(), Y), (tilted_cube(), (1, 1, -1))],
)
def test_normal_bundle_rule_on_fixtures(P, xi):
    for comp, rep in all_normal_bundle_checks(P, xi):
        assert rep.ok, (comp, rep)


def test_normal_bundle_values():
    ((_, rep),) = all_normal_bundle_checks(chopped_p1(), Y)
    assert (rep.c_minus, rep.c_plus, rep.c) == (-1, 1, 0)
    assert not normal_bundle_rule(1, 1, 0).ok and normal_bundle_rule(-2, 3, 1).ok
    extremal = next(c for c in fixed_components(product_cube(EPS), (1, 1, 0)) if c.extremal)
    with pytest.raises(FpdError):
        normal_bundle_consistency(extremal, cross_level(product_cube(EPS), (1, 1, 0), 1))


# -- properties ---------------------------------------------------------------

REFERENCE = [
    (chopped_p1(), Y),
    (chopped_p2(), Y),
    (product_cube(EPS), (1, 1, 0)),
]
_REFERENCE_FPD = [extract_fpd(P, xi) for P, xi in REFERENCE]


@settings(max_examples=100)
@given(st.integers(0, len(REFERENCE) - 1), unimodular())
def test_extraction_is_basis_free(i, A):
    P, xi = REFERENCE[i]
    d = extract_fpd(apply_unimodular(P, A), transform_circle(xi, A))
    assert d.levels == _REFERENCE_FPD[i].levels


_entry = st.tuples(
    st.sampled_from([-3, -1, 0, 1, 3]),
    st.sampled_from([0, 2]),
    st.sampled_from([(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (-1, 0, 1), (0, 1, 1)]),
)


@given(st.lists(_entry, min_size=1, max_size=5), st.lists(_entry, min_size=1, max_size=5))
def test_comparison_is_symmetric_and_modes_are_nested(e1, e2):
    a, b = synthetic_fpd(e1), synthetic_fpd(e2)
    assert compare_fpd(a, a, FULL).same
    verdicts = []
    for mode in MODES:
        ab, ba = compare_fpd(a, b, mode), compare_fpd(b, a, mode)
        assert ab.verdict == ba.verdict and ab.reasons == ba.reasons
        verdicts.append(ab.same)
    # full implies small implies star-small
    star, small, full = verdicts
    assert (not full or small) and (not small or star)
