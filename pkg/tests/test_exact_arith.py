"""Exact Gaussian-rational arithmetic: frozen values and field axioms."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from gkverify.exact_arith import I, MINUS_I, ONE, ZERO, GaussianRational, gr

rationals = st.fractions(
    min_value=Fraction(-10), max_value=Fraction(10), max_denominator=50
)
gaussians = st.builds(gr, rationals, rationals)
nonzero_gaussians = gaussians.filter(lambda z: z != ZERO)


def test_constants():
    assert ZERO == gr(0)
    assert ONE == gr(1)
    assert I == gr(0, 1)
    assert MINUS_I == -I
    assert I * I == -ONE
    assert MINUS_I * I == ONE


def test_frozen_product():
    # (3/4 + 2i/5)(-1/2 + i) = -31/40 + 11i/20, computed by hand
    a = gr(Fraction(3, 4), Fraction(2, 5))
    b = gr(Fraction(-1, 2), 1)
    assert a * b == gr(Fraction(-31, 40), Fraction(11, 20))


def test_frozen_inverse():
    # (3 + 4i)^-1 = (3 - 4i)/25
    z = gr(3, 4)
    assert z.inverse() == gr(Fraction(3, 25), Fraction(-4, 25))
    assert z * z.inverse() == ONE


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_conjugate_and_norm():
    z = gr(Fraction(2, 3), Fraction(-5, 7))
    w = z * z.conjugate()
    assert w.im == 0
    assert w.re == Fraction(2, 3) ** 2 + Fraction(5, 7) ** 2


@given(gaussians, gaussians, gaussians)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a
    assert a - a == ZERO
    assert a + (-a) == ZERO


@given(nonzero_gaussians)
def test_multiplicative_inverse(a):
    assert a * a.inverse() == ONE
    assert (ONE / a) * a == ONE


@given(gaussians, nonzero_gaussians)
def test_division_roundtrip(a, b):
    assert (a / b) * b == a


@given(gaussians)
def test_components_stay_reduced(a):
    for part in (a.re, a.im):
        assert isinstance(part, Fraction)
        assert gcd(part.numerator, part.denominator) == 1


@given(gaussians, gaussians)
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()


@given(gaussians)
def test_hash_consistency(a):
    b = gr(a.re, a.im)
    assert a == b
    assert hash(a) == hash(b)
