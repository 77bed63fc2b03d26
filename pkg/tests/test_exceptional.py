from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from semifree.exceptional import (
    ExceptionalError,
    FormVector,
    H2Class,
    canonical_pairing,
    cremona_move,
    emin_candidates,
    emin_set,
    enumerate_exceptional,
    eprime_set,
    is_exceptional,
    pairing,
    reduce_form,
)
from semifree.fixtures import tilted_cube
from semifree.morse_wall import cross_level
from strategies import reduced_forms


def C(a, *b):
    return H2Class(a, tuple(b))


def test_pairing_and_canonical_class():
    assert pairing(C(1, 0, 0), C(1, 0, 0)) == 1
    assert pairing(C(0, -1, 0), C(0, -1, 0)) == -1
    assert pairing(C(1, 1, 1), C(0, -1, 0)) == 1
    assert pairing(C(1, 1, 1), C(1, 1, 1)) == -1
    assert canonical_pairing(C(1, 1, 1)) == -1
    assert str(C(1, 1, 1)) == "L-E1-E2" and str(C(0, 0, -1)) == "E2" and str(C(2, 1, 1, 1, 1, 1)) == "2L-E1-E2-E3-E4-E5"
    with pytest.raises(ExceptionalError):
        pairing(C(1, 0), C(1, 0, 0))


@pytest.mark.parametrize(
    "cls, expected",
    [
        (C(0, -1, 0, 0), True),
        (C(1, 1, 1, 0), True),
        (C(2, 1, 1, 1, 1, 1), True),
        (C(3, 2, 1, 1, 1, 1, 1, 1), True),
        (C(1, 1, 0, 0), False),  # square 0
        (C(0, 1, 0, 0), False),  # -E1: square -1 but K.x = +1
        (C(1, 2, 0, 0, 0, 0, 0, 0, 0), False),
        (C(3, 2, 2, 1, 0, 0, 0, 0, 0, 0, 0), False),
    ],
)
def test_is_exceptional_examples(cls, expected):
    assert is_exceptional(cls) is expected


def test_reduce_form_example():
    red = reduce_form(FormVector(10, (5, 4, 3)))
    assert red.form == FormVector(8, (3, 2, 1))
    assert [m.kind for m in red.log] == ["cremona"]
    with pytest.raises(ExceptionalError, match="not a blowup form"):
        reduce_form(FormVector(3, (2, 2)))
    with pytest.raises(ExceptionalError):
        reduce_form(FormVector(1, (1, 1)))  # non-positive volume


def test_emin_examples():
    assert emin_set(FormVector(9, (4, 4, 1))) == {C(0, 0, 0, -1), C(1, 1, 1, 0)}
    assert emin_set(FormVector(9, (1, 1, 1))) == {C(0, -1, 0, 0), C(0, 0, -1, 0), C(0, 0, 0, -1)}
    with pytest.raises(ExceptionalError):
        emin_set(FormVector(3, (2, 2)))


def test_eprime_on_tilted_cube():
    w = cross_level(tilted_cube(), (1, 1, -1), 2)
    rep = eprime_set(w)
    assert rep.agree and len(rep.eprime) == 3 and rep.sample == Fraction(3, 2)
    assert rep.eprime == {C(1, 0, 1, 1), C(1, 1, 1, 0), C(1, 1, 0, 1)}


# -- properties ---------------------------------------------------------------

_k = st.integers(3, 7)


@st.composite
def _classes(draw):
    k = draw(_k)
    vec = st.tuples(*([st.integers(-4, 4)] * k))
    return k, draw(st.integers(-4, 4)), draw(vec), draw(st.integers(-4, 4)), draw(vec)


@st.composite
def _triples(draw, k):
    return tuple(draw(st.permutations(range(1, k + 1)))[:3])


@given(_classes(), st.data())
def test_cremona_is_an_involutive_isometry(data, draw):
    k, a, b, c, d = data
    x, y = H2Class(a, b), H2Class(c, d)
    idx = draw.draw(_triples(k))
    x2, y2 = cremona_move(x, idx), cremona_move(y, idx)
    assert cremona_move(x2, idx) == x
    assert pairing(x2, y2) == pairing(x, y)
    assert canonical_pairing(x2) == canonical_pairing(x)
    v = FormVector(Fraction(7), tuple(Fraction(1, n + 1) for n in range(k)))
    assert cremona_move(v, idx).area(x2) == v.area(x)


@given(reduced_forms(constrained=False), st.data())
def test_reduction_log_transports_areas(form, data):
    alpha, deltas = form
    k = len(deltas)
    assume(k >= 3)
    # scramble a reduced form by Cremona moves, then reduce it back
    v = FormVector(alpha, deltas)
    for _ in range(data.draw(st.integers(0, 3))):
        w = cremona_move(v, data.draw(_triples(k)))
        if w.alpha <= 0 or any(x <= 0 for x in w.deltas):
            break
        v = w
    red = reduce_form(v)
    assert red.form.reduced and red.form.volume == v.volume
    x = H2Class(data.draw(st.integers(-3, 3)), tuple(data.draw(st.integers(-3, 3)) for _ in range(k)))
    assert red.form.area(red.replay(x)) == v.area(x)
    assert red.unreplay(red.replay(x)) == x
    assert is_exceptional(red.replay(x)) == is_exceptional(x)


@given(reduced_forms(constrained=False))
def test_enumeration_matches_brute_force(form):
    alpha, deltas = form
    v = FormVector(alpha, deltas)
    bound = deltas[0] + Fraction(1, 2)
    got = sorted((x.a, x.b, ar) for x, ar in enumerate_exceptional(v.k, bound, v))
    # on CP2#k with k <= 6 every exceptional class has degree at most 2
    want = sorted((a, b, ar) for (a, b), ar in oracles.exceptional_brute(v.k, alpha, deltas, bound, 3))
    assert got == want


@given(reduced_forms())
def test_emin_has_one_of_the_two_closed_forms(form):
    alpha, deltas = form
    v = FormVector(alpha, deltas)
    k = v.k
    got = emin_set(v)
    assert got <= emin_candidates(v)
    j = min(i for i in range(k) if deltas[i] == deltas[-1])
    tail = {H2Class.exceptional(i, k) for i in range(j + 1, k + 1)}
    if k >= 3:
        with_line = {C(1, 1, 1, *([0] * (k - 2)))} | {H2Class.exceptional(i, k) for i in range(3, k + 1)}
        assert got in (tail, with_line)
    else:
        assert got == tail
