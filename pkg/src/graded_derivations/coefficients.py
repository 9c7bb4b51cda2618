"""Exact Gaussian-rational coefficients ``re + im*i`` with ``re, im`` in Q."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

_RAT = r"[+-]?\d+(?:/\d+)?"
_COEFF_RE = re.compile(
    rf"^(?:(?P<re>{_RAT})(?P<im>[+-](?:\d+(?:/\d+)?)?)i|(?P<re_only>{_RAT})|(?P<im_only>{_RAT})i|(?P<unit>[+-]?)i)$"
)


class GaussianRational:
    """An element of Q(i). Immutable, hashable, compared exactly."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "_hash", hash((re, im)))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value)
        if isinstance(value, complex):
            raise TypeError("complex floats are not exact; use GaussianRational(re, im)")
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        s = text.replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        m = _COEFF_RE.match(s)
        if not m:
            raise ValueError(f"malformed coefficient {text!r}")
        if m.group("re") is not None:
            im = m.group("im")
            return cls(Fraction(m.group("re")), Fraction(im + "1" if im in "+-" else im))
        if m.group("re_only") is not None:
            return cls(Fraction(m.group("re_only")))
        if m.group("im_only") is not None:
            return cls(0, Fraction(m.group("im_only")))
        return cls(0, -1 if m.group("unit") == "-" else 1)

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are exact")
        if n < 0:
            return (ONE / self) ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = f"{self.im}i"
        if self.re == 0:
            return im
        sign = "" if self.im < 0 else "+"
        return f"{self.re}{sign}{im}"

    def __repr__(self):
        return f"GaussianRational('{self}')"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
