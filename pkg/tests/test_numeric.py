import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_gaps.numeric import Mat2, UnimodularMatrix, as_rational, frobenius_norm_sq, mat_apply, mat_mul

I = UnimodularMatrix(1, 0, 0, 1)
ints = st.integers(-1000, 1000)
fracs = st.fractions(min_value=-100, max_value=100, max_denominator=50)


def test_mat_mul_examples():
    assert mat_mul(I, I) == I
    assert mat_mul(UnimodularMatrix(1, 1, 0, 1), UnimodularMatrix(1, 0, 1, 1)) == UnimodularMatrix(2, 1, 1, 1)
    r = UnimodularMatrix(0, 1, -1, 0)
    assert r @ r == -I


def test_mat_apply_examples():
    assert mat_apply(I, (Fraction(1), Fraction(3, 2))) == (1, Fraction(3, 2))
    assert mat_apply(UnimodularMatrix(1, 1, 0, 1), (1, 2)) == (3, 2)
    x, y = Fraction(2, 7), Fraction(-5, 3)
    assert mat_apply(UnimodularMatrix(0, -1, 1, 0), (x, y)) == (-y, x)


@pytest.mark.parametrize("g, expected", [
    (I, 2),
    (UnimodularMatrix(1, 1, 0, 1), 3),
    (UnimodularMatrix(1, 99, 0, 1), 2 + 99**2),
])
def test_frobenius_norm_sq(g, expected):
    assert frobenius_norm_sq(g) == expected


def test_unimodular_rejects_bad_input():
    with pytest.raises(ValueError):
        UnimodularMatrix(2, 0, 0, 1)
    with pytest.raises(ValueError):
        UnimodularMatrix(Fraction(1, 2), 0, 0, 2)


def test_unimodular_inverse():
    g = UnimodularMatrix(-5, 4, -9, 7)
    assert g @ g.inverse() == I


def test_det_multiplicative_random_pairs():
    rng = random.Random(0)
    for _ in range(10_000):
        x = Mat2(*(rng.randint(-1000, 1000) for _ in range(4)))
        y = Mat2(*(rng.randint(-1000, 1000) for _ in range(4)))
        assert mat_mul(x, y).det() == x.det() * y.det()


def test_no_wraparound_on_large_entries():
    big = 10**7
    g = Mat2(big, big, big, big)
    assert (g @ g @ g).a == 4 * big**3


@given(st.tuples(ints, ints, ints, ints), st.tuples(ints, ints, ints, ints), fracs, fracs)
def test_apply_respects_composition(e1, e2, x, y):
    g, h = Mat2(*e1), Mat2(*e2)
    assert mat_apply(g @ h, (x, y)) == mat_apply(g, mat_apply(h, (x, y)))


@given(st.tuples(fracs, fracs, fracs, fracs), st.tuples(fracs, fracs, fracs, fracs))
def test_rational_det_multiplicative(e1, e2):
    x, y = Mat2(*e1), Mat2(*e2)
    assert (x @ y).det() == x.det() * y.det()


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(-10**4, 10**4).filter(bool))
def test_rational_canonical_form(n, d, k):
    a, b = Fraction(n, d), Fraction(k * n, k * d)
    assert (a.numerator, a.denominator) == (b.numerator, b.denominator)
    assert a.denominator > 0


def test_as_rational():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational(0.5) == Fraction(1, 2)
    assert as_rational(7) == 7
    with pytest.raises(TypeError):
        as_rational(object())
