from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from semifree.exact_linalg import det
from semifree.fixtures import (
    box,
    chopped_p1,
    chopped_p2,
    product_cube,
    skewed_square,
    tilted_cube,
    twist_matrix_2d,
    unit_triangle,
)
from semifree.polytope import (
    OPEN,
    UNBOUNDED,
    HalfSpace,
    PolytopeError,
    apply_unimodular,
    check_delzant,
    edge_lattice_length,
    facet_halfspaces,
    from_halfspaces,
    momentum_image,
    slice_polygon,
    transform_circle,
)
from strategies import positive, unimodular


def _raw(P):
    return [(h.normal, h.offset, h.excluded) for h in P.halfspaces]


def test_product_cube_has_8_vertices_and_12_edges():
    P = product_cube(Fraction(1, 10))
    assert len(P.vertices) == 8
    assert len(P.edges) == 12
    assert {v.point for v in P.vertices} == oracles.vertices(_raw(P), 3)


def test_triangle_has_three_vertices():
    assert len(unit_triangle().vertices) == 3


def test_p1_vertices_and_open_edges():
    P = chopped_p1()
    assert {v.point for v in P.vertices} == {(0, 0, 2), (2, 0, 2)}
    # three edges not adjacent to any vertex; all run into the open window
    opens = P.open_edges()
    assert len(opens) == 3
    assert all(P.edges[k].start == OPEN and P.edges[k].end == OPEN for k in opens)


def test_p2_vertices():
    assert {v.point for v in chopped_p2().vertices} == {(0, 0, 0), (0, 0, 2)}


def test_delzant_cube_and_p1():
    assert check_delzant(product_cube()).ok
    rep = check_delzant(chopped_p1())
    assert rep.ok and len(rep.vertices) == 2
    assert all(abs(v.determinant) == 1 for v in rep.vertices)


def test_p1_published_edge_directions():
    # the published edge lists, up to orientation of each direction
    rep = check_delzant(chopped_p1())
    published = {
        (0, 0, 2): [(1, 0, 0), (1, 1, 0), (-1, -1, -1)],
        (2, 0, 2): [(-1, 0, 0), (0, 1, 0), (0, -1, -1)],
    }
    for v in rep.vertices:
        ours = {tuple(d) for d in v.directions}
        assert ours == set(published[v.point])
        assert abs(det([list(d) for d in published[v.point]])) == 1


def test_skewed_square_fails_at_two_vertices():
    rep = check_delzant(skewed_square())
    assert not rep.ok
    assert len(rep.failures()) == 2


def test_edge_lattice_lengths():
    p1 = chopped_p1()
    closed = [e for e in p1.edges if e.closed]
    assert [edge_lattice_length(e) for e in closed] == [2]
    p2 = chopped_p2()
    assert [edge_lattice_length(e) for e in p2.edges if e.closed] == [2]
    assert all(edge_lattice_length(p1.edges[k]) == UNBOUNDED for k in p1.open_edges())
    # a 2D edge from (0,0) to (3,3) has primitive direction (1,1) and length 3
    rhombus = from_halfspaces(
        [HalfSpace((1, -1), 0), HalfSpace((-1, 1), -1), HalfSpace((1, 0), 0), HalfSpace((-1, 0), -3)], 2
    )
    diag = [e for e in rhombus.edges if {e.start_point, e.end_point} == {(0, 0), (3, 3)}]
    assert [edge_lattice_length(e) for e in diag] == [3]


def test_empty_interior_is_rejected():
    with pytest.raises(PolytopeError):
        from_halfspaces([HalfSpace((1, 0), 1), HalfSpace((-1, 0), -1), HalfSpace((0, 1), 0)], 2)


def test_twist_turns_slanted_cuts_vertical():
    eps = Fraction(1, 10)
    strip = [
        HalfSpace((1, 0), 0),
        HalfSpace((-1, 0), -(1 + eps)),
        HalfSpace((0, 1), 0),
        HalfSpace((0, -1), -1),
        HalfSpace((1, 1), 1, excluded=True, label="cut-low"),
        HalfSpace((-1, -1), -(1 + eps), excluded=True, label="cut-high"),
    ]
    P = from_halfspaces(strip, 2)
    Q = apply_unimodular(P, twist_matrix_2d())
    cuts = {h.label: h.normal for h in Q.halfspaces if h.excluded}
    assert cuts == {"cut-low": (1, 0), "cut-high": (-1, 0)}
    # the two points on the top edge of the strip move to (lambda + 1, 1) etc.
    assert check_delzant(Q).ok == check_delzant(P).ok


def test_apply_identity_and_inverse():
    P = product_cube()
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert {v.point for v in apply_unimodular(P, I).vertices} == {v.point for v in P.vertices}
    A = [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
    Ainv = [[1, 0, 0], [-1, 1, 0], [0, 0, 1]]
    back = apply_unimodular(apply_unimodular(P, A), Ainv)
    assert {v.point for v in back.vertices} == {v.point for v in P.vertices}


def test_non_unimodular_transform_is_rejected():
    with pytest.raises(PolytopeError):
        apply_unimodular(product_cube(), [[2, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_pentagon_slice_of_p1_at_minus_two_fifths():
    t = Fraction(-2, 5)
    Q = slice_polygon(chopped_p1(), (0, 1, 0), t, basis=((0, 1, 0), (1, 0, 0), (0, 0, 1)))
    # coordinates (x, z) in the plane y = t
    assert set(Q.vertices_at(t)) == {(t, 0), (t, 2 + t), (2, 2 + t), (2, 1), (1, 0)}
    raw = _raw(chopped_p1())
    section = oracles.plane_section(raw, (0, 1, 0), t)
    assert {(x, z) for x, _, z in section} == set(Q.vertices_at(t))


def test_cube_slices():
    eps = Fraction(1, 10)
    P = product_cube(eps)
    mid = slice_polygon(P, (1, 1, 0), interval=(1, 1 + eps))
    assert len(mid.edges) == 4
    low = slice_polygon(P, (1, 1, 0), Fraction(1, 2))
    assert len(low.edges) == 4
    raw = _raw(P)
    assert low.area()(Fraction(1, 2)) == oracles.lattice_area_of_section(
        oracles.plane_section(raw, (1, 1, 0), Fraction(1, 2)), (1, 1, 0)
    )


def test_slice_outside_momentum_image():
    with pytest.raises(PolytopeError):
        slice_polygon(product_cube(), (1, 1, 0), 5)
    with pytest.raises(PolytopeError):
        slice_polygon(product_cube(), (2, 2, 0), 1)


def test_interval_containing_a_vertex_level_is_rejected():
    with pytest.raises(PolytopeError):
        slice_polygon(tilted_cube(), (1, 1, -1), interval=(1, 3))


def test_momentum_image_of_open_window():
    img = momentum_image(chopped_p1(), (0, 1, 0))
    assert (img.lo, img.hi) == (-Fraction(9, 20), Fraction(9, 20))
    assert not img.lo_attained and not img.hi_attained


# -- properties ---------------------------------------------------------------


@st.composite
def boxes(draw):
    return box((draw(positive), draw(positive), draw(positive)))


@given(boxes(), unimodular())
def test_delzant_invariant_under_unimodular(P, A):
    Q = apply_unimodular(P, A)
    assert check_delzant(Q).ok == check_delzant(P).ok
    assert sorted(e.length for e in Q.edges) == sorted(e.length for e in P.edges)


@given(st.sampled_from([product_cube(), tilted_cube(), chopped_p1(), chopped_p2()]), unimodular())
def test_unimodular_preserves_delzant_on_fixtures(P, A):
    assert check_delzant(apply_unimodular(P, A)).ok


@given(boxes(), unimodular())
def test_face_enumeration_round_trip(P, A):
    Q = apply_unimodular(P, A)
    redundant = HalfSpace(Q.halfspaces[0].normal, Q.halfspaces[0].offset - 1, label="redundant")
    R = from_halfspaces(list(Q.halfspaces) + [redundant], 3)
    rebuilt = from_halfspaces(facet_halfspaces(R), 3)
    assert {h.normal for h in facet_halfspaces(R)} == {h.normal for h in Q.halfspaces}
    assert "redundant" not in {h.label for h in facet_halfspaces(R)}
    assert {v.point for v in rebuilt.vertices} == {v.point for v in Q.vertices}
    assert {v.point for v in Q.vertices} == oracles.vertices(_raw(Q), 3)


@given(
    st.sampled_from(
        [
            (tilted_cube(), (1, 1, -1), (Fraction(1, 10), Fraction(19, 10))),
            (tilted_cube(), (1, 1, -1), (Fraction(21, 10), Fraction(39, 10))),
            (product_cube(), (1, 1, 0), (Fraction(1, 10), Fraction(9, 10))),
            (chopped_p1(), (0, 1, 0), (Fraction(-2, 5), Fraction(-1, 100))),
            (chopped_p2(), (0, 1, 0), (Fraction(1, 100), Fraction(2, 5))),
        ]
    ),
    st.fractions(min_value=0, max_value=1, max_denominator=50),
    unimodular(),
)
def test_symbolic_slice_agrees_with_concrete(case, s, A):
    P, xi, (a, b) = case
    P2 = apply_unimodular(P, A)
    xi2 = transform_circle(xi, A)
    t = a + (b - a) * s
    if t in (a, b):
        return
    sym = slice_polygon(P2, xi2, interval=(a, b))
    conc = slice_polygon(P2, xi2, t)
    assert sym.vertices_at(t) == conc.vertices_at(t)
    assert [f(t) for f in sym.lengths()] == conc.lengths_at(t)
    oracle = oracles.lattice_area_of_section(oracles.plane_section(_raw(P2), xi2, t), xi2)
    assert sym.area()(t) == oracle
