from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from crreg.exact import ONE, ZERO, I, GaussRational, gq

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
gauss = st.builds(GaussRational, fractions, fractions)


def to_sympy(x: GaussRational):
    return sp.Rational(x.re.numerator, x.re.denominator) + sp.I * sp.Rational(x.im.numerator, x.im.denominator)


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO
    if a:
        assert a * (ONE / a) == ONE


@given(gauss, gauss)
def test_matches_sympy(a, b):
    assert to_sympy(a * b) == sp.expand(to_sympy(a) * to_sympy(b))
    assert to_sympy(a + b) == to_sympy(a) + to_sympy(b)
    if b:
        assert sp.expand(to_sympy(a / b) * to_sympy(b)) == to_sympy(a)


@given(gauss)
def test_conjugate_and_norm(a):
    assert a * a.conjugate() == GaussRational(a.norm())
    assert a.conjugate().conjugate() == a


@given(gauss)
def test_canonical_form(a):
    _, _, d = a.key()
    assert d > 0
    assert GaussRational(a.re * 3, a.im * 3) / 3 == a
    assert hash(GaussRational(a.re * 2, a.im * 2) / 2) == hash(a)


def test_powers_and_constants():
    assert I * I == -ONE
    assert I ** -1 == -I
    assert gq(2) ** 10 == 1024
    assert GaussRational("1/2", "-3/4").re == Fraction(1, 2)
    assert GaussRational(3) == 3 and GaussRational(3) == Fraction(3)
    assert hash(GaussRational(Fraction(1, 2))) == hash(Fraction(1, 2))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_str():
    assert str(GaussRational(2, -1)) == "2-i"
    assert str(GaussRational(-3, 4)) == "-3+4*i"
