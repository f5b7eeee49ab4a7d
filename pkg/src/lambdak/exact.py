"""Exact arithmetic in Q[sqrt(d)] and polynomials over it.

Rationals are ``fractions.Fraction``. A :class:`QuadExt` is ``a + b*sqrt(d)``
with rational ``a, b`` and a fixed integer radicand ``d``. Perfect-square
radicands are kept symbolic; they only collapse in :func:`to_float`, which
means ``Q[sqrt(4)]`` has zero divisors (``2 - sqrt(4)``) and inversion of such
elements raises ``ZeroDivisionError``.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class BaseMismatchError(ValueError):
    """Raised when combining values over different radicands."""


def _is_square(d: int) -> bool:
    return d >= 0 and math.isqrt(d) ** 2 == d


class QuadExt:
    """Immutable number ``a + b*sqrt(d)``."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a: Scalar = 0, b: Scalar = 0, d: int = 2):
        if not isinstance(d, int) or d < 2:
            raise ValueError(f"radicand must be an integer >= 2, got {d!r}")
        self._a = Fraction(a)
        self._b = Fraction(b)
        self._d = d

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(0, 1, d)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other._d != self._d:
                raise BaseMismatchError(f"radicands differ: {self._d} vs {other._d}")
            return other
        if isinstance(other, (int, Rational)):
            return QuadExt(other, 0, self._d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self._a + o._a, self._b + o._b, self._d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self._a - o._a, self._b - o._b, self._d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, e = self._a, self._b, o._a, o._b
        return QuadExt(a * c + b * e * self._d, a * e + b * c, self._d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d b^2``."""
        return self._a * self._a - self._d * self._b * self._b

    def inverse(self) -> "QuadExt":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError(f"{self} is not invertible")
        return QuadExt(self._a / nrm, -self._b / nrm, self._d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out = QuadExt(1, 0, self._d)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def rational_value(self) -> Fraction | None:
        """The value as a Fraction when it is rational (b == 0 or d a perfect square)."""
        if self._b == 0:
            return self._a
        if _is_square(self._d):
            return self._a + self._b * math.isqrt(self._d)
        return None

    def sign(self) -> int:
        """Exact sign of the real value (uses the positive square root)."""
        a, b = self._a, self._b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2
        diff = a * a - self._d * b * b
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    # equality is component-wise; ordering is by real value
    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self._d == other._d and self._a == other._a and self._b == other._b
        if isinstance(other, (int, Rational)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QuadExt with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return to_float(self)

    def __repr__(self):
        return f"QuadExt({self._a!s}, {self._b!s}, d={self._d})"

    def __str__(self):
        return format_exact(self)


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_exact(x: QuadExt) -> str:
    """Report string ``"a/b + c/e*sqrt(d)"``."""
    return f"{_frac_str(x.a)} + {_frac_str(x.b)}*sqrt({x.d})"


def parse_exact(text: str) -> QuadExt:
    """Inverse of :func:`format_exact`."""
    try:
        left, right = text.split(" + ", 1)
        coef, rad = right.split("*sqrt(", 1)
        return QuadExt(Fraction(left), Fraction(coef), int(rad.rstrip(")")))
    except ValueError as exc:
        raise ValueError(f"not an exact quadratic string: {text!r}") from exc


def to_float(x: QuadExt) -> float:
    """Nearest double to ``a + b*sqrt(d)``."""
    if x.b == 0:
        return float(x.a)
    if _is_square(x.d):
        return float(x.a + x.b * math.isqrt(x.d))
    # Enough digits that cancellation in a + b*sqrt(d) cannot reach the
    # 17th significant digit of the result.
    mag = abs(x.a) + abs(x.b) * (math.isqrt(x.d) + 1)
    prec = 60
    while True:
        with localcontext() as ctx:
            ctx.prec = prec
            val = (Decimal(x.a.numerator) / Decimal(x.a.denominator)
                   + Decimal(x.b.numerator) / Decimal(x.b.denominator) * Decimal(x.d).sqrt())
        if val != 0 and abs(val) * 10 ** (prec - 25) > mag:
            return float(val)
        if prec > 2000:
            return float(val)
        prec *= 2


def quad_add(x: QuadExt, y: QuadExt) -> QuadExt:
    return x + y


def quad_mul(x: QuadExt, y: QuadExt) -> QuadExt:
    return x * y


def quad_neg(x: QuadExt) -> QuadExt:
    return -x


class QuadPoly:
    """Polynomial in ``t`` with :class:`QuadExt` coefficients, lowest degree first."""

    __slots__ = ("_c", "_d")

    def __init__(self, coeffs: Iterable, d: int):
        cs = []
        for c in coeffs:
            if isinstance(c, QuadExt):
                if c.d != d:
                    raise BaseMismatchError(f"coefficient over sqrt({c.d}) in poly over sqrt({d})")
                cs.append(c)
            else:
                cs.append(QuadExt(c, 0, d))
        while cs and cs[-1].is_zero():
            cs.pop()
        self._c = tuple(cs)
        self._d = d

    @classmethod
    def variable(cls, d: int) -> "QuadPoly":
        return cls([0, 1], d)

    @property
    def d(self) -> int:
        return self._d

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def _coerce(self, other) -> "QuadPoly":
        if isinstance(other, QuadPoly):
            if other._d != self._d:
                raise BaseMismatchError(f"radicands differ: {self._d} vs {other._d}")
            return other
        if isinstance(other, (QuadExt, int, Rational)):
            return QuadPoly([other], self._d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        m = max(len(self._c), len(o._c))
        z = QuadExt(0, 0, self._d)
        return QuadPoly([(self._c[i] if i < len(self._c) else z) + (o._c[i] if i < len(o._c) else z)
                         for i in range(m)], self._d)

    __radd__ = __add__

    def __neg__(self):
        return QuadPoly([-c for c in self._c], self._d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self._c or not o._c:
            return QuadPoly([], self._d)
        out = [QuadExt(0, 0, self._d)] * (len(self._c) + len(o._c) - 1)
        for i, p in enumerate(self._c):
            if p.is_zero():
                continue
            for j, q in enumerate(o._c):
                out[i + j] = out[i + j] + p * q
        return QuadPoly(out, self._d)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = QuadPoly([1], self._d)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, QuadPoly):
            return self._d == other._d and self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash((self._c, self._d))

    def derivative(self) -> "QuadPoly":
        return QuadPoly([c * i for i, c in enumerate(self._c)][1:], self._d)

    def __call__(self, t):
        """Horner evaluation; exact for QuadExt/rational ``t``, float otherwise."""
        if isinstance(t, (QuadExt, int, Rational)):
            acc = QuadExt(0, 0, self._d)
            for c in reversed(self._c):
                acc = acc * t + c
            return acc
        acc = 0.0
        for c in reversed(self._c):
            acc = acc * t + to_float(c)
        return acc

    def __repr__(self):
        return f"QuadPoly([{', '.join(str(c) for c in self._c)}], d={self._d})"


def poly_mul(p: QuadPoly, q: QuadPoly) -> QuadPoly:
    return p * q


def poly_sub(p: QuadPoly, q: QuadPoly) -> QuadPoly:
    return p - q


def as_rational_coeffs(p: QuadPoly) -> Sequence[Fraction]:
    """Coefficients of ``p`` when it has no sqrt part; raises otherwise."""
    out = []
    for c in p.coeffs:
        if c.b != 0:
            raise ValueError("polynomial has irrational coefficients")
        out.append(c.a)
    return out
