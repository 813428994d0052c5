"""Gaussian rational scalars: complex numbers with Fraction parts.

Exact field arithmetic for the desk-scale reference computations.  The
class is deliberately small; only the operations the exact layer needs are
implemented.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


class GQ:
    """Gaussian rational ``re + im*i`` with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GQ):
            assert im == 0
            self.re, self.im = re.re, re.im
            return
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def coerce(x) -> "GQ":
        return x if isinstance(x, GQ) else GQ(x)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = GQ.coerce(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = GQ.coerce(other)
        return GQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GQ(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GQ.coerce(other))

    def __rsub__(self, other):
        return GQ.coerce(other) + (-self)

    def __mul__(self, other):
        other = GQ.coerce(other)
        return GQ(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GQ":
        return GQ(self.re, -self.im)

    def __truediv__(self, other):
        other = GQ.coerce(other)
        a2 = other.abs2()
        if a2 == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GQ(num.re / a2, num.im / a2)

    def __rtruediv__(self, other):
        return GQ.coerce(other) / self

    def inverse(self) -> "GQ":
        return GQ(1) / self

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"GQ({self.re})"
        return f"GQ({self.re}, {self.im})"


ZERO = GQ(0)
ONE = GQ(1)
I = GQ(0, 1)


def frac_sqrt(f: Fraction):
    """Exact square root of a nonnegative Fraction, or None."""
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gq_sqrt(z: GQ):
    """Exact square root within the Gaussian rationals, or None."""
    if not z.im:
        if z.re >= 0:
            r = frac_sqrt(z.re)
            return GQ(r) if r is not None else None
        r = frac_sqrt(-z.re)
        return GQ(0, r) if r is not None else None
    r = frac_sqrt(z.abs2())
    if r is None:
        return None
    u = frac_sqrt((z.re + r) / 2)
    if u is None or u == 0:
        return None
    w = GQ(u, z.im / (2 * u))
    return w if w * w == z else None
