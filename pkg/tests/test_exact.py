import math
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lambdak.exact import (BaseMismatchError, QuadExt, QuadPoly, as_rational_coeffs, format_exact,
                           parse_exact, poly_mul, poly_sub, quad_add, quad_mul, quad_neg, to_float)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
radicands = st.sampled_from([2, 3, 5, 6, 7, 11, 26])


def quads(d):
    return st.builds(lambda a, b: QuadExt(a, b, d), fractions, fractions)


@st.composite
def triples(draw):
    d = draw(radicands)
    q = quads(d)
    return draw(q), draw(q), draw(q)


def test_examples():
    s5 = QuadExt.sqrt(5)
    assert (1 + s5) * (1 - s5) == QuadExt(-4, 0, 5)
    assert QuadExt(0, 1, 4) * QuadExt(0, 1, 4) == QuadExt(4, 0, 4)
    assert QuadExt(Fraction(1, 2), 0, 5) + QuadExt(Fraction(1, 2), 1, 5) == QuadExt(1, 1, 5)
    assert quad_mul(1 + s5, 1 - s5) == -4
    assert quad_add(s5, s5) == QuadExt(0, 2, 5)
    assert quad_neg(s5) == QuadExt(0, -1, 5)


def test_to_float_examples():
    assert to_float(QuadExt(Fraction(1, 3), 0, 4)) == pytest.approx(1 / 3, abs=1e-16)
    assert to_float(QuadExt.sqrt(5)) == pytest.approx(2.2360679774997896, abs=1e-15)
    assert to_float(QuadExt(Fraction(1, 12), Fraction(1, 12), 5)) == pytest.approx(0.2696723314583158)
    # perfect square collapses
    assert to_float(QuadExt(Fraction(1, 6), Fraction(1, 12), 4)) == pytest.approx(1 / 3, abs=1e-16)


def test_to_float_cancellation():
    # a + b sqrt(d) with a close to -b sqrt(d): convergents of sqrt(2)
    x = QuadExt(-665857, 470832, 2)
    with localcontext() as ctx:
        ctx.prec = 80
        ref = float(Decimal(-665857) + Decimal(470832) * Decimal(2).sqrt())
    assert to_float(x) == pytest.approx(ref, rel=1e-14)
    # 665857^2 - 2 * 470832^2 = 1, so x = -1 / (665857 + 470832 sqrt(2))
    assert to_float(x) == pytest.approx(-1 / (665857 + 470832 * math.sqrt(2)), rel=1e-12)
    assert x.sign() == -1


@settings(max_examples=200, deadline=None)
@given(triples())
def test_field_axioms(t):
    x, y, z = t
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if not x.is_zero():
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@settings(max_examples=200, deadline=None)
@given(triples())
def test_sign_matches_high_precision(t):
    x, y, _ = t
    with localcontext() as ctx:
        ctx.prec = 60
        ref = (Decimal(x.a.numerator) / x.a.denominator
               + Decimal(x.b.numerator) / x.b.denominator * Decimal(x.d).sqrt())
    expected = (ref > 0) - (ref < 0)
    assert x.sign() == expected
    assert (x < y) == (to_float(x) < to_float(y)) or abs(to_float(x) - to_float(y)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(triples())
def test_norm_is_multiplicative(t):
    x, y, _ = t
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * x.conjugate() == x.norm()


def test_perfect_square_zero_divisor():
    z = 2 - QuadExt.sqrt(4)
    assert not z.is_zero()
    assert z.rational_value() == 0
    assert z.sign() == 0
    with pytest.raises(ZeroDivisionError):
        z.inverse()
    with pytest.raises(ZeroDivisionError):
        QuadExt(0, 0, 5).inverse()


def test_base_mismatch():
    with pytest.raises(BaseMismatchError):
        QuadExt.sqrt(5) + QuadExt.sqrt(7)
    with pytest.raises(BaseMismatchError):
        QuadPoly([QuadExt.sqrt(5)], 7)
    with pytest.raises(ValueError):
        QuadExt(1, 1, 1)


def test_comparisons_and_pow():
    s = QuadExt.sqrt(2)
    assert s > 1 and s < Fraction(3, 2)
    assert s ** 2 == 2
    assert s ** -2 == Fraction(1, 2)
    assert s ** 0 == 1
    assert hash(QuadExt(3, 0, 5)) == hash(Fraction(3))


@settings(max_examples=100, deadline=None)
@given(triples())
def test_format_parse_round_trip(t):
    x = t[0]
    assert parse_exact(format_exact(x)) == x
    assert str(x) == format_exact(x)


def test_format_shape():
    assert format_exact(QuadExt(Fraction(1, 12), Fraction(1, 12), 5)) == "1/12 + 1/12*sqrt(5)"
    with pytest.raises(ValueError):
        parse_exact("1/2 + sqrt5")


def test_poly_examples():
    t = QuadPoly.variable(5)
    p = QuadPoly([1, -1], 5) * QuadPoly([1, 1], 5)
    assert p == QuadPoly([1, 0, -1], 5)
    assert poly_sub(p, p).is_zero()
    assert poly_sub(p, p).degree == -1
    s5 = QuadExt.sqrt(5)
    q = (t * s5 - 1) ** 2
    assert q == QuadPoly([1, -2 * s5, 5], 5)
    assert poly_mul(t, t) == QuadPoly([0, 0, 1], 5)
    assert as_rational_coeffs(p) == [1, 0, -1]
    with pytest.raises(ValueError):
        as_rational_coeffs(q)


def test_poly_derivative_and_eval():
    s5 = QuadExt.sqrt(5)
    q = (QuadPoly.variable(5) * s5 - 1) ** 2
    assert q.derivative() == QuadPoly([-2 * s5, 10], 5)
    root = s5 / 5
    assert q(root).is_zero()
    assert q.derivative()(root).is_zero()
    assert q(Fraction(1, 2)) == Fraction(9, 4) - s5
    assert q(0.5) == pytest.approx(to_float(Fraction(9, 4) - s5))
    assert math.isclose(q(1.0), (math.sqrt(5) - 1) ** 2)
