from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from semifree.fixtures import chopped_p1, chopped_p2, product_cube, tilted_cube
from semifree.polygon import HalfPlane, Affine, polygon_from_halfplanes
from semifree.polytope import slice_polygon
from semifree.reduced_space import (
    CP2,
    S2XS2,
    LatticeError,
    SurfaceLattice,
    area_profile,
    edge_intersection_matrix,
    euler_class_eval,
    polygon_normalize,
    reduced_space,
    reduced_volume_profile,
    s2s2_basis_change,
    self_intersection,
)
from strategies import delzant_fans

EPS = Fraction(1, 10)
Y = (0, 1, 0)
XZ = ((0, 1, 0), (1, 0, 0), (0, 0, 1))  # level y, picture coordinates (x, z)


def _polygon(normals, offsets):
    return polygon_from_halfplanes([HalfPlane(n, Affine.const(c)) for n, c in zip(normals, offsets)], 0)


def test_pentagon_below_zero_is_two_point_blowup():
    Q = slice_polygon(chopped_p1(), Y, Fraction(-2, 5), basis=XZ)
    lat, steps = polygon_normalize(Q)
    assert lat.diffeo_type == "CP2#2"
    assert len(lat.edge_classes) == 5 and len(steps) == 2
    names = {Q.edges[i].carriers[0]: lat.format_class(c) for i, c in enumerate(lat.edge_classes)}
    assert names == {"bottom": "E2", "left": "L-E2", "top": "L-E1", "right": "E1", "slant": "L-E1-E2"}
    M = edge_intersection_matrix(Q)
    assert M == [[lat.pair(a, b) for b in lat.edge_classes] for a in lat.edge_classes]
    assert sorted(M[i][i] for i in range(5)) == [-1, -1, -1, 0, 0]


def test_triangle_and_square():
    lat, _ = polygon_normalize([(1, 0), (0, 1), (-1, -1)])
    assert lat.model == CP2 and lat.k == 0 and lat.edge_classes == ((1,), (1,), (1,))
    lat, _ = polygon_normalize([(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert lat.model == S2XS2 and lat.k == 0
    names = [lat.format_class(c) for c in lat.edge_classes]
    # opposite edges are homologous, adjacent edges span B and F
    assert names[0] == names[2] and names[1] == names[3] and {names[0], names[1]} == {"B", "F"}
    assert names == ["F", "B", "F", "B"]


@pytest.mark.parametrize("k", range(6))
def test_hirzebruch_quadrilateral(k):
    normals = [(1, 0), (0, 1), (-1, k), (0, -1)]
    Q = _polygon(normals, [0, 0, -(k + 4), -1])
    assert [self_intersection(Q, i) for i in range(4)] == [0, -k, 0, k]
    lat, _ = polygon_normalize(Q)
    assert lat.diffeo_type == ("S2xS2" if k % 2 == 0 else "CP2#1")


def test_self_intersections():
    Q0 = slice_polygon(chopped_p1(), Y, 0, basis=XZ)
    top = Q0.edge_by_carrier("cap")
    assert self_intersection(Q0, top) == 0
    tri = _polygon([(1, 0), (0, 1), (-1, -1)], [0, 0, -1])
    assert [self_intersection(tri, i) for i in range(3)] == [1, 1, 1]
    pent = slice_polygon(chopped_p1(), Y, Fraction(-2, 5), basis=XZ)
    assert self_intersection(pent, pent.edge_by_carrier("slant")) == -1


def test_area_profiles_of_the_two_fixed_sphere_classes():
    Q = slice_polygon(chopped_p1(), Y, interval=(Fraction(-2, 5), Fraction(-1, 10)), basis=XZ)
    s1 = area_profile(Q, Q.edge_by_carrier("top"))
    s2 = area_profile(Q, Q.edge_by_carrier("left"))
    assert (s1.area, s1.slope) == (Affine(2, -1), -1)
    assert (s2.area, s2.slope) == (Affine(2, 1), 1)
    assert s1.area - s2.area == Affine(0, -2)
    # oracle: lattice length of the top edge measured on the plane section
    t = Fraction(-3, 10)
    pts = oracles.plane_section([(h.normal, h.offset, h.excluded) for h in chopped_p1().halfspaces], Y, t)
    top = sorted(p for p in pts if p[2] == 2 + t)
    assert top[-1][0] - top[0][0] == s1.area(t)


def test_euler_class_eval():
    below = slice_polygon(tilted_cube(), (1, 1, -1), interval=(Fraction(1, 10), Fraction(19, 10)))
    R = reduced_space(below)
    minus_ones = [i for i in range(len(below.edges)) if self_intersection(below, i) == -1]
    assert [euler_class_eval(R, R.edge_class(i)) for i in minus_ones if R.area(R.edge_class(i)).b < 0] == [-1, -1, -1]
    cube = slice_polygon(product_cube(EPS), (1, 1, 0), interval=(1, 1 + EPS))
    Rc = reduced_space(cube)
    fibres = [i for i in range(4) if cube.lengths()[i].is_constant]
    assert fibres and all(euler_class_eval(Rc, Rc.edge_class(i)) == 0 for i in fibres)
    a, b = R.edge_class(0), R.edge_class(1)
    ab = tuple(x + y for x, y in zip(a, b))
    assert euler_class_eval(R, ab) == euler_class_eval(R, a) + euler_class_eval(R, b)


def test_volume_profiles_are_continuous():
    vp = reduced_volume_profile(product_cube(EPS), (1, 1, 0), (Fraction(1, 2), Fraction(21, 20)))
    assert [c for c, _ in vp.critical] == [1]
    assert vp.one_sided_continuous()
    vp = reduced_volume_profile(chopped_p1(), Y, (Fraction(-2, 5), Fraction(2, 5)))
    assert vp.one_sided_continuous()
    lo_piece = vp.pieces[0]
    level0 = slice_polygon(chopped_p1(), Y, 0)
    assert lo_piece.area(0) == level0.area()(0) == dict(vp.critical)[0]
    flat = reduced_volume_profile(product_cube(EPS), (0, 0, 1), (Fraction(1, 4), Fraction(3, 4)))
    (piece,) = flat.pieces
    assert piece.area.c1 == piece.area.c2 == 0


def test_s2s2_basis_change():
    Q = slice_polygon(chopped_p1(), Y, Fraction(-2, 5), basis=XZ)
    lat, _ = polygon_normalize(Q)
    bc = s2s2_basis_change(lat)
    L_E1_E2 = (1, -1, -1)
    assert bc.apply(L_E1_E2) == (0, 0, 1)  # E~1
    assert bc.apply((1, -1, 0)) == (1, 0, 0)  # B
    assert bc.apply((1, 0, -1)) == (0, 1, 0)  # F
    for x in [(1, 0, 0), (0, 1, 0), (3, -2, 5)]:
        assert bc.unapply(bc.apply(x)) == x
    with pytest.raises(LatticeError):
        s2s2_basis_change(SurfaceLattice(CP2, 1))


def test_non_rational_or_non_delzant_input():
    with pytest.raises(LatticeError):
        polygon_normalize([(1, 0), (1, 2), (-1, -1)])


# -- properties ---------------------------------------------------------------


def _oracle_self_int(normals, i):
    n = len(normals)
    a, u, b = normals[i - 1], normals[i], normals[(i + 1) % n]
    return -oracles.det([list(a), list(b)]) // oracles.det([list(u), list(b)])


@given(delzant_fans())
def test_normalized_form_matches_fan_intersections(normals):
    lat, steps = polygon_normalize(normals)
    n = len(normals)
    for i in range(n):
        for j in range(n):
            if i == j:
                want = _oracle_self_int(normals, i)
            else:
                want = 1 if (i - j) % n in (1, n - 1) else 0
            assert lat.pair(lat.edge_classes[i], lat.edge_classes[j]) == want
    # Noether: rank of H_2 is (number of edges) - 2
    assert lat.rank == n - 2
    # the type is fixed by the fan: spin exactly for the even quadrilaterals
    spin = n == 4 and all(_oracle_self_int(normals, i) % 2 == 0 for i in range(n))
    assert lat.diffeo_type == ("S2xS2" if spin else f"CP2#{n - 3}" if n > 3 else "CP2")
    K = tuple(-sum(c[r] for c in lat.edge_classes) for r in range(lat.rank))
    assert K == lat.canonical


@given(delzant_fans(max_blowups=3), st.data())
def test_basis_change_is_an_isometry(normals, data):
    lat, _ = polygon_normalize(normals)
    if lat.model != CP2 or lat.k < 2:
        return
    bc = s2s2_basis_change(lat)
    vec = st.lists(st.integers(-4, 4), min_size=lat.rank, max_size=lat.rank)
    x, y = data.draw(vec), data.draw(vec)
    assert lat.pair(x, y) == bc.target.pair(bc.apply(x), bc.apply(y))
    assert bc.unapply(bc.apply(x)) == tuple(x)


REGULAR = [
    (product_cube(EPS), (1, 1, 0), (Fraction(1, 10), Fraction(9, 10))),
    (product_cube(EPS), (1, 1, 0), (1, 1 + EPS)),
    (tilted_cube(), (1, 1, -1), (Fraction(1, 10), Fraction(19, 10))),
    (tilted_cube(), (1, 1, -1), (Fraction(-19, 10), Fraction(-1, 10))),
    (tilted_cube(), (1, 1, -1), (Fraction(21, 10), Fraction(39, 10))),
    (chopped_p1(), Y, (Fraction(-2, 5), Fraction(-1, 10))),
    (chopped_p1(), Y, (Fraction(1, 10), Fraction(2, 5))),
    (chopped_p2(), Y, (Fraction(1, 10), Fraction(2, 5))),
]


@given(st.sampled_from(REGULAR), st.fractions(0, 1, max_denominator=20), st.fractions(0, 1, max_denominator=20))
def test_dh_slopes_are_integral_and_exact(case, s1, s2):
    P, xi, (a, b) = case
    Q = slice_polygon(P, xi, interval=(a, b))
    R = reduced_space(Q)
    t1, t2 = a + (b - a) * s1, a + (b - a) * s2
    for i, length in enumerate(Q.lengths()):
        prof = area_profile(R, i)
        assert prof.area.b.denominator == 1
        if t1 != t2:
            assert (length(t2) - length(t1)) / (t2 - t1) == prof.slope
        # every edge class is realized with its lattice length by the form functional
        assert R.area(R.edge_class(i)) == length
