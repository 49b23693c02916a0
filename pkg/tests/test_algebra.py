from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import koszul_by_transpositions, shuffles_by_filter
from polycobar.algebra import (
    GradedElement,
    Generator,
    add,
    bracket,
    compose,
    inverse,
    koszul_sign,
    multiply,
    shuffles,
    substitute,
)
from polycobar.errors import ForeignGeneratorError, MalformedInputError, MixedDegreeError

GENS = [Generator("b", (i,), d) for i, d in enumerate([1, 1, 2, 3, 4], start=1)]


def el(*gens, coeff=1):
    return GradedElement({tuple(gens): coeff})


b1, b2, b3, b4, b5 = GENS


@st.composite
def homogeneous(draw, degree=None):
    d = draw(st.integers(1, 5)) if degree is None else degree
    terms = {}
    for _ in range(draw(st.integers(0, 3))):
        word, left = [], d
        while left:
            choices = [g for g in GENS if g.degree <= left]
            g = draw(st.sampled_from(choices))
            word.append(g)
            left -= g.degree
        terms[tuple(word)] = draw(st.integers(-3, 3))
    return GradedElement(terms)


@st.composite
def elements(draw):
    x = GradedElement.zero()
    for _ in range(draw(st.integers(0, 3))):
        x = x + draw(homogeneous())
    return x


def test_add_examples():
    w = el(b1, b2)
    assert add(w * 3, w * -3) == 0
    assert len(add(el(b1, b2), el(b2, b1))) == 2
    assert add(w, GradedElement.zero()) == w


def test_multiply_examples():
    w = el(b1, b3)
    assert multiply(w, GradedElement.unit()) == w
    p = multiply(el(b1), el(b2))
    assert p == el(b1, b2) and p.degree() == 2
    assert multiply(el(b1) + el(b2), el(b3)) == el(b1, b3) + el(b2, b3)


def test_bracket_examples():
    ci, cj = el(b1), el(b2)
    assert bracket(ci, cj) == el(b1, b2) + el(b2, b1)
    x4, y1 = el(b5), el(b1)
    assert bracket(x4, y1) == el(b5, b1) - el(b1, b5)
    assert bracket(ci, ci) == el(b1, b1) * 2


def test_bracket_mixed_degree():
    with pytest.raises(MixedDegreeError):
        bracket(el(b1) + el(b3), el(b2))


def test_zero_and_unit():
    assert GradedElement.zero().degree() is None
    assert GradedElement.unit().degree() == 0
    assert str(GradedElement.zero()) == "0"
    assert str(GradedElement.unit() * 3) == "3"


def test_render_canonical():
    x = el(b2, b1) * -1 + el(b1, b2) * 2 + el(b3)
    assert str(x) == "b{3} + 2*b{1}*b{2} - b{2}*b{1}"
    assert Generator("a", (3,), 5, braces=False).label == "a3"


def test_zero_coefficients_not_stored():
    x = GradedElement([((b1,), 2), ((b1,), -2), ((b2,), 0)])
    assert x.terms == {}


def test_generator_degree_positive():
    with pytest.raises(MalformedInputError):
        Generator("b", (1,), 0)


@given(elements(), elements(), elements())
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(elements())
def test_unital(x):
    assert x * GradedElement.unit() == x == GradedElement.unit() * x


@given(elements(), elements(), elements())
def test_distributive(x, y, z):
    assert x * (y + z) == x * y + x * z


@given(homogeneous(), homogeneous())
def test_bracket_graded_antisymmetry(a, b):
    if not a or not b:
        return
    sign = -1 if (a.degree() * b.degree()) % 2 == 0 else 1
    assert bracket(a, b) == bracket(b, a) * sign


@given(homogeneous(), homogeneous(), homogeneous())
def test_graded_jacobi(a, b, c):
    if not (a and b and c):
        return
    da, db, dc = a.degree(), b.degree(), c.degree()

    def s(k):
        return -1 if k % 2 else 1

    total = (
        bracket(a, bracket(b, c)) * s(da * dc)
        + bracket(b, bracket(c, a)) * s(db * da)
        + bracket(c, bracket(a, b)) * s(dc * db)
    )
    assert total == 0


perms = st.integers(1, 6).flatmap(lambda n: st.permutations(range(n)))


@given(perms, st.data())
def test_koszul_matches_transposition_oracle(perm, data):
    degrees = data.draw(st.lists(st.integers(0, 5), min_size=len(perm), max_size=len(perm)))
    assert koszul_sign(degrees, perm) == koszul_by_transpositions(degrees, perm)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.permutations(range(n)), st.permutations(range(n)))),
       st.data())
def test_koszul_cocycle(pair, data):
    p, q = pair
    degrees = data.draw(st.lists(st.integers(0, 5), min_size=len(p), max_size=len(p)))
    moved = [degrees[i] for i in p]
    assert koszul_sign(degrees, compose(p, q)) == koszul_sign(degrees, p) * koszul_sign(moved, q)


@given(perms, st.data())
def test_koszul_inverse(perm, data):
    degrees = data.draw(st.lists(st.integers(0, 5), min_size=len(perm), max_size=len(perm)))
    moved = [degrees[i] for i in perm]
    assert koszul_sign(degrees, perm) * koszul_sign(moved, inverse(perm)) == 1


@given(perms, st.data())
def test_koszul_even_degrees(perm, data):
    degrees = data.draw(st.lists(st.integers(0, 4).map(lambda k: 2 * k), min_size=len(perm), max_size=len(perm)))
    assert koszul_sign(degrees, perm) == 1


def test_koszul_examples():
    assert koszul_sign([1, 2, 3], (0, 1, 2)) == 1
    assert koszul_sign([2, 3], (1, 0)) == 1
    assert koszul_sign([3, 3], (1, 0)) == -1


def test_koszul_rejects_non_permutation():
    with pytest.raises(MalformedInputError):
        koszul_sign([1, 1], (0, 0))


def test_shuffle_examples():
    assert len(shuffles(1, 1)) == 2
    anchored = shuffles(2, 1, anchor_first=True)
    assert len(anchored) == 2 and all(t[0] == 0 for t in anchored)


@given(st.integers(1, 4), st.integers(1, 4))
def test_shuffles_match_filter_oracle(p, q):
    assert sorted(shuffles(p, q)) == shuffles_by_filter(p, q)
    assert len(shuffles(p, q)) == comb(p + q, p)


@given(st.integers(1, 5), st.integers(1, 5))
def test_anchored_shuffles_partition(p, q):
    anchored = set(shuffles(p, q, anchor_first=True))
    other = {t for t in shuffles(p, q) if t[p] == 0}
    assert anchored.isdisjoint(other)
    assert anchored | other == set(shuffles(p, q))


def test_substitute_is_homomorphism():
    images = {b1: el(b2) + el(b1), b2: el(b1) * 3}
    x = el(b1, b2) - el(b2)
    assert substitute(x, images) == (el(b2) + el(b1)) * el(b1) * 3 - el(b1) * 3
    with pytest.raises(ForeignGeneratorError):
        substitute(el(b3), images)
