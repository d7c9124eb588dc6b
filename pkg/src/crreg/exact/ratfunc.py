"""Rational functions ``num/den`` kept in lowest terms.

Normal form: ``gcd(num, den) == 1`` and ``den`` monic in gradlex order.
"""

from __future__ import annotations

from typing import Sequence

from .gauss import ONE, GaussRational
from .poly import MultiPoly, poly_gcd, poly_lcm


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, reduce: bool = True):
        if den is None:
            den = MultiPoly.one(num.nvars)
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator live in different rings")
        if not den.terms:
            raise ZeroDivisionError("identically zero denominator")
        if reduce:
            if not num.terms:
                den = MultiPoly.one(num.nvars)
            elif not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num = num.divide_exact(g)
                    den = den.divide_exact(g)
            lc = den.leading_term()[1]
            if lc != ONE:
                inv = ONE / lc
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFunction":
        return cls(p, MultiPoly.one(p.nvars), reduce=False)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ValueError(f"not a polynomial: ({self.num}) / ({self.den})")
        return self.num.scale(ONE / self.den.constant_term())

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        other = _lift(other, self.nvars)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-_lift(other, self.nvars))

    def __rsub__(self, other):
        return _lift(other, self.nvars) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _lift(other, self.nvars)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _lift(other, self.nvars)
        if not other.num.terms:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def diff(self, i: int) -> "RationalFunction":
        return RationalFunction(
            self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den
        )

    def evaluate(self, point) -> GaussRational:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("point is a pole of the rational function")
        return self.num.evaluate(point) / d

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = _lift(other, self.nvars)
            except TypeError:
                return NotImplemented
        # cross-multiplied identity; independent of normal form
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def to_str(self, names=None) -> str:
        if self.is_polynomial():
            return self.as_poly().to_str(names)
        return f"({self.num.to_str(names)})/({self.den.to_str(names)})"

    def __repr__(self):
        return f"RationalFunction({self.to_str()!r})"


def _lift(x, nvars: int) -> RationalFunction:
    if isinstance(x, RationalFunction):
        if x.nvars != nvars:
            raise ValueError("nvars mismatch")
        return x
    if isinstance(x, MultiPoly):
        return RationalFunction.from_poly(x)
    return RationalFunction.from_poly(MultiPoly.constant(nvars, x))


def common_denominator(funcs: Sequence[RationalFunction]) -> tuple[list[MultiPoly], MultiPoly]:
    """Write every function over one denominator (the lcm of the reduced ones)."""
    nv = funcs[0].nvars
    den = MultiPoly.one(nv)
    for f in funcs:
        if f.den != den and not f.den.is_constant():
            den = poly_lcm(den, f.den)
    nums = []
    for f in funcs:
        factor = den.divide_exact(f.den)
        assert factor is not None
        nums.append(f.num * factor)
    return nums, den


def substitute_rational(p: MultiPoly, images: Sequence[RationalFunction]) -> RationalFunction:
    """``p(images)`` for a polynomial ``p`` and rational arguments."""
    nums, den = common_denominator(images)
    d = p.degree()
    if d < 0:
        return RationalFunction.from_poly(MultiPoly.zero(images[0].nvars))
    den_powers = [MultiPoly.one(den.nvars)]
    for _ in range(d):
        den_powers.append(den_powers[-1] * den)
    total = MultiPoly.zero(den.nvars)
    # p(n/D) * D**d = sum c * n**e * D**(d-|e|)
    for e, c in p.terms.items():
        mono = MultiPoly.one(den.nvars)
        for i, k in enumerate(e):
            if k:
                mono = mono * nums[i] ** k
        total = total + (mono * den_powers[d - sum(e)]).scale(c)
    return RationalFunction(total, den_powers[d])


def compose_rational(f: RationalFunction, images: Sequence[RationalFunction]) -> RationalFunction:
    top = substitute_rational(f.num, images)
    bottom = substitute_rational(f.den, images)
    return top / bottom
