"""Exact Gaussian rationals: complex numbers a + b*i with a, b in Q.

Literal syntax (shared with the JSON input files)::

    "3"  "-1/2"  "i"  "-i"  "2*i"  "1/2+1/3*i"  "1-i"

No whitespace is allowed inside a literal. ``str()`` produces the same
syntax, so ``parse(str(z)) == z`` always holds.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import InvalidInput

__all__ = ["GaussianRational", "parse", "ZERO", "ONE", "I"]

_NUM = r"\d+(?:/\d+)?"
_LITERAL = re.compile(
    rf"""^(?:
        (?P<re>[+-]?{_NUM})(?P<im_tail>[+-](?:{_NUM}\*)?i)?
      | (?P<im_only>[+-]?(?:{_NUM}\*)?i)
    )$""",
    re.VERBOSE,
)


class GaussianRational:
    """Immutable element of Q(i). Parts are stored as reduced ``Fraction``s."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("imaginary part given twice")
            re, im = re.re, re.im
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        # skips Fraction() coercion; callers guarantee Fraction inputs
        z = object.__new__(cls)
        object.__setattr__(z, "re", re)
        object.__setattr__(z, "im", im)
        object.__setattr__(z, "_hash", None)
        return z

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return parse(x)
        if isinstance(x, (Rational, int)) and not isinstance(x, bool):
            return GaussianRational(x)
        raise InvalidInput(f"cannot interpret {x!r} as a Gaussian rational")

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            if not isinstance(other, Rational):
                return NotImplemented
            return GaussianRational._raw(self.re + other, self.im)
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            if not isinstance(other, Rational):
                return NotImplemented
            return GaussianRational._raw(self.re - other, self.im)
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if not isinstance(other, Rational):
                return NotImplemented
            return GaussianRational._raw(self.re * other, self.im * other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, b)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        n = other.norm()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        q = self * other.conjugate()
        return GaussianRational._raw(q.re / n, q.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        """|z|^2, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.re) if not self.im else hash((self.re, self.im))
            object.__setattr__(self, "_hash", h)
        return h

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # -- text -------------------------------------------------------------
    def __str__(self):
        re_, im_ = self.re, self.im
        if not im_:
            return str(re_)
        if im_ == 1:
            tail = "i"
        elif im_ == -1:
            tail = "-i"
        else:
            tail = f"{im_}*i"
        if not re_:
            return tail
        if not tail.startswith("-"):
            tail = "+" + tail
        return f"{re_}{tail}"

    def __repr__(self):
        return f"GaussianRational('{self}')"


def _imag_part(token: str) -> Fraction:
    # token looks like [+-]?(NUM*)?i
    body = token[:-1]
    sign = -1 if body.startswith("-") else 1
    body = body.lstrip("+-")
    if not body:
        return Fraction(sign)
    return sign * Fraction(body[:-1])


def parse(text: str) -> GaussianRational:
    """Parse a literal such as ``"1/2-3*i"``; raises InvalidInput otherwise."""
    if not isinstance(text, str):
        raise InvalidInput(f"expected a string literal, got {text!r}")
    m = _LITERAL.match(text)
    if m is None:
        raise InvalidInput(f"malformed Gaussian rational literal {text!r}")
    try:
        if m.group("im_only") is not None:
            return GaussianRational(0, _imag_part(m.group("im_only")))
        im = _imag_part(m.group("im_tail")) if m.group("im_tail") else 0
        return GaussianRational(Fraction(m.group("re")), im)
    except ZeroDivisionError:
        raise InvalidInput(f"zero denominator in literal {text!r}") from None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
