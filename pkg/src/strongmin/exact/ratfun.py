"""Exact rational functions: reduced fractions of Gaussian-rational polynomials."""
from __future__ import annotations

from fractions import Fraction

from .poly import Poly
from .scalars import GQ


class RatFun:
    """Quotient of polynomials, kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = Poly.coerce(num)
        den = Poly.coerce(den if den is not None else 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([1])
            return
        g = num.gcd(den)
        if g.degree >= 1:
            num = num.exact_div(g)
            den = den.exact_div(g)
        inv = den.lead().inverse()
        self.num = num * inv
        self.den = den * inv

    @staticmethod
    def coerce(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        if isinstance(x, Poly):
            return RatFun(x)
        return RatFun(Poly([GQ.coerce(x)]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = RatFun.coerce(other)
        return self.num == other.num and self.den == other.den

    def __add__(self, other):
        other = RatFun.coerce(other)
        return RatFun(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFun.coerce(other))

    def __rsub__(self, other):
        return RatFun.coerce(other) + (-self)

    def __mul__(self, other):
        other = RatFun.coerce(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFun.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun.coerce(other) / self

    def eval(self, z) -> GQ:
        z = GQ.coerce(z)
        d = self.den.eval(z)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.eval(z) / d

    def eval_complex(self, z: complex) -> complex:
        return self.num.eval_complex(z) / self.den.eval_complex(z)

    def valuation_at(self, point) -> int:
        """Order of ``point`` as zero (positive) or pole (negative).

        Raises on the zero function, whose valuation is +infinity.
        """
        if self.is_zero():
            raise ValueError("valuation of the zero function is undefined")
        point = GQ.coerce(point)
        return self.num.valuation_at(point) - self.den.valuation_at(point)

    def valuation_at_infinity(self) -> int:
        if self.is_zero():
            raise ValueError("valuation of the zero function is undefined")
        return self.den.degree - self.num.degree

    def subs_inverse(self) -> "RatFun":
        """Exact substitution lambda -> 1/mu."""
        if self.is_zero():
            return RatFun(Poly())
        p, q = self.num.degree, self.den.degree
        num = self.num.reversed()
        den = self.den.reversed()
        if q >= p:
            num = num.shift(q - p)
        else:
            den = den.shift(p - q)
        return RatFun(num, den)

    def __repr__(self):
        if self.den == Poly([1]):
            return f"RatFun({self.num!r})"
        return f"RatFun({self.num!r}, {self.den!r})"


def ratfun_from_fraction(x: Fraction) -> RatFun:
    return RatFun(Poly([GQ(x)]))
