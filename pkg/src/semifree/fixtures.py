"""Built-in polytopes used by the bundled scenarios and the test-suite."""

from __future__ import annotations

from fractions import Fraction

from .polytope import HalfSpace, LabeledPolytope, from_halfspaces

DEFAULT_EPS = Fraction(1, 10)
DEFAULT_SLAB = Fraction(9, 20)


def box(lengths, origin=(0, 0, 0), labels=("x", "y", "z")) -> LabeledPolytope:
    """Axis-parallel box ``origin <= x <= origin + lengths``."""
    hs = []
    dim = len(lengths)
    for i in range(dim):
        e = tuple(1 if j == i else 0 for j in range(dim))
        m = tuple(-x for x in e)
        lo = Fraction(origin[i])
        hs.append(HalfSpace(e, lo, label=f"{labels[i]}-min"))
        hs.append(HalfSpace(m, -(lo + Fraction(lengths[i])), label=f"{labels[i]}-max"))
    return from_halfspaces(hs, dim)


def product_cube(eps=DEFAULT_EPS) -> LabeledPolytope:
    """Three spheres with areas 1+eps, 1, 1."""
    return box((1 + Fraction(eps), 1, 1))


def tilted_cube() -> LabeledPolytope:
    """The cube [0,2]^3; used with the circle (1,1,-1)."""
    return box((2, 2, 2))


def monotone_cube() -> LabeledPolytope:
    """The cube [-1,1]^3, the monotone product of three spheres."""
    return box((2, 2, 2), origin=(-1, -1, -1))


def _segment_hull_halfspaces(slab):
    slab = Fraction(slab)
    return [
        HalfSpace((1, -1, 0), 0, label="left"),
        HalfSpace((0, 1, -1), -2, label="top"),
        HalfSpace((-1, 0, 0), -2, label="right"),
        HalfSpace((-1, 0, 1), -1, label="slant"),
        HalfSpace((0, 0, 1), 0, label="bottom"),
        HalfSpace((0, 1, 0), -slab, excluded=True, label="slab-min"),
        HalfSpace((0, -1, 0), -slab, excluded=True, label="slab-max"),
    ]


def chopped_p1(slab=DEFAULT_SLAB) -> LabeledPolytope:
    """Open polytope whose only vertices are (0,0,2) and (2,0,2).

    The window ``|y| < slab`` is open; below ``y = 0`` it agrees with
    :func:`chopped_p2`.
    """
    hs = _segment_hull_halfspaces(slab) + [HalfSpace((0, 0, -1), -2, label="cap")]
    return from_halfspaces(hs, 3)


def chopped_p2(slab=DEFAULT_SLAB) -> LabeledPolytope:
    """Open polytope whose only vertices are (0,0,0) and (0,0,2)."""
    hs = _segment_hull_halfspaces(slab) + [HalfSpace((1, -2, 0), 0, label="cap")]
    return from_halfspaces(hs, 3)


def unit_triangle() -> LabeledPolytope:
    return from_halfspaces(
        [HalfSpace((1, 0), 0), HalfSpace((0, 1), 0), HalfSpace((-1, -1), -1)], 2
    )


def unit_square() -> LabeledPolytope:
    return box((1, 1), labels=("x", "y"))


def skewed_square() -> LabeledPolytope:
    """A quadrilateral failing the Delzant test at two corners."""
    return from_halfspaces(
        [
            HalfSpace((1, 0), 0),
            HalfSpace((0, 1), 0),
            HalfSpace((-1, 0), -1),
            HalfSpace((-1, -2), -3),
        ],
        2,
    )


def twist_matrix_2d():
    return [[1, 0], [1, 1]]


def twist_matrix_3d():
    return [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
