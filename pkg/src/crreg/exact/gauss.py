"""Exact Gaussian rationals, i.e. elements of Q(i).

A value is stored as ``(a + b*i) / d`` with integers ``a, b`` and ``d > 0``
and ``gcd(a, b, d) == 1``, so equal numbers always have equal
representations.  The real and imaginary parts are exposed as
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational


class GaussRational:
    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRational) and im == 0:
            self._a, self._b, self._d = re._a, re._b, re._d
            return
        re = _as_fraction(re)
        im = _as_fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        g = gcd(a, b, d)
        self._a, self._b, self._d = a // g, b // g, d // g

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussRational":
        # d > 0 is assumed by every caller
        if d != 1:
            g = gcd(a, b, d)
            if g != 1:
                a //= g
                b //= g
                d //= g
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, (Fraction, Rational)):
            return cls._raw(x.numerator, 0, x.denominator)
        if isinstance(x, str):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussRational")

    # -- parts -----------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "GaussRational":
        return GaussRational._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """``|x|**2`` as an exact rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussRational):
            try:
                other = GaussRational.coerce(other)
            except TypeError:
                return NotImplemented
        if self._d == other._d:
            d = self._d
            if d == 1:
                return GaussRational._raw(self._a + other._a, self._b + other._b, 1)
            return GaussRational._raw(self._a + other._a, self._b + other._b, d)
        d1, d2 = self._d, other._d
        return GaussRational._raw(
            self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussRational):
            try:
                other = GaussRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussRational):
            try:
                other = GaussRational.coerce(other)
            except TypeError:
                return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        if b1 == 0 and b2 == 0:
            return GaussRational._raw(a1 * a2, 0, self._d * other._d)
        return GaussRational._raw(
            a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * other._d
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, GaussRational):
            try:
                other = GaussRational.coerce(other)
            except TypeError:
                return NotImplemented
        c, e = other._a, other._b
        if c == 0 and e == 0:
            raise ZeroDivisionError("GaussRational division by zero")
        # (a+bi)/d1 / ((c+ei)/d2) = (a+bi)(c-ei) d2 / (d1 (c^2+e^2))
        n2 = c * c + e * e
        a = (self._a * c + self._b * e) * other._d
        b = (self._b * c - self._a * e) * other._d
        return GaussRational._raw(a, b, self._d * n2)

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (GaussRational._raw(1, 0, 1) / self) ** (-k)
        result = GaussRational._raw(1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, int):
            return self._b == 0 and self._d == 1 and self._a == other
        if isinstance(other, Fraction):
            return (
                self._b == 0
                and self._a == other.numerator
                and self._d == other.denominator
            )
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def key(self) -> tuple[int, int, int]:
        """Canonical integer triple ``(a, b, d)``; used for deterministic sorting."""
        return (self._a, self._b, self._d)

    # -- display ---------------------------------------------------------
    def __repr__(self):
        return f"GaussRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return f"{_imag_str(im)}"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{_imag_str(abs(im))}"


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}*i"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


ZERO = GaussRational._raw(0, 0, 1)
ONE = GaussRational._raw(1, 0, 1)
I = GaussRational._raw(0, 1, 1)


def gq(x) -> GaussRational:
    """Shorthand coercion used all over the package."""
    return GaussRational.coerce(x)
