import math
from fractions import Fraction

import numpy as np
import pytest

from lambdak.exact import QuadExt, to_float
from lambdak.kernels import f2, f4
from lambdak.majorant import (TIGHT_K, alpha, beta, bound_constants, factored_gap, gap_polynomial,
                              majorant_coeffs, majorant_eval, majorant_identity_residual,
                              majorant_polynomial, majorant_roots, mmp_bound, nikiforov_bound)


def test_alpha_examples():
    assert alpha(2).rational_value() == Fraction(1, 2)
    assert alpha(3).rational_value() == Fraction(1, 3)
    assert alpha(8).rational_value() == Fraction(5, 28)
    assert alpha(24).rational_value() == Fraction(7, 69)
    assert alpha(4) == QuadExt(Fraction(1, 12), Fraction(1, 12), 5)
    with pytest.raises(ValueError):
        alpha(1)


def test_beta_examples():
    assert beta(2).rational_value() == Fraction(4, 3)
    assert beta(7).rational_value() == Fraction(5, 2)
    assert to_float(beta(3)) == pytest.approx(1.618034, abs=1e-6)
    assert beta(3) == (3 + QuadExt.sqrt(5)) / (1 + QuadExt.sqrt(5))
    with pytest.raises(ValueError):
        beta(1)


@pytest.mark.parametrize("k", list(range(2, 30)) + [100, 577])
def test_alpha_is_beta_over_2r(k):
    c = bound_constants(k)
    assert c.tight == (k in TIGHT_K)
    if k >= 3:
        # exact over Q[sqrt(k+1)]: beta_{k-1} / (2(k-1)) - alpha_k == 0
        assert (c.beta_r / (2 * c.r) - c.alpha_k).sign() == 0


def test_alpha_against_float_formula():
    for k in range(2, 200):
        ref = ((k - 2) * math.sqrt(k + 1) + 2) / (2 * k * (k - 1))
        assert to_float(alpha(k)) == pytest.approx(ref, rel=1e-14)


def test_alpha_improves_universal_bound():
    assert to_float(alpha(2)) == nikiforov_bound(2)
    for k in range(3, 1001):
        assert to_float(alpha(k)) < nikiforov_bound(k)


def test_coefficients_r2():
    c = majorant_coeffs(2)
    assert c.a.rational_value() == Fraction(2, 3)
    assert c.b.rational_value() == Fraction(11, 9)
    assert c.gamma.rational_value() == Fraction(4, 9)
    assert c.slack().rational_value() == Fraction(1, 9)


@pytest.mark.parametrize("r", [2, 3, 5, 7, 23, 50])
def test_coefficient_facts(r):
    c = majorant_coeffs(r)
    s = QuadExt.sqrt(r + 2)
    assert c.gamma.sign() > 0
    assert c.slack() == ((s - 2) * (s + 1) * (s + 3) + 2) / ((s + 1) ** 2 * 2)
    # a_r r = beta_r, so the chain ends at beta_r n
    assert (c.a * r - beta(r)).sign() == 0


@pytest.mark.parametrize("r", [2, 7])
def test_identity_examples(r):
    assert majorant_identity_residual(r).is_zero()
    h = gap_polynomial(r)
    assert h(1).is_zero()
    assert gap_polynomial(r).degree == 4
    assert factored_gap(r).degree == 4


def test_identity_and_roots_all_r():
    for r in range(2, 101):
        assert majorant_identity_residual(r).is_zero(), r
        assert majorant_roots(r).ok, r
        assert majorant_coeffs(r).slack().sign() >= 0


def test_eval_examples():
    assert majorant_eval(2, 1.0) == pytest.approx(1.0, abs=1e-14)
    for r in range(2, 11):
        t = 1 / math.sqrt(r + 2)
        assert majorant_eval(r, t) == pytest.approx(t, abs=1e-14)
    c = majorant_coeffs(3)
    # f2(3, 0) = -1/3 and f4(3, 0) = -3/15 = -1/5
    exact0 = c.a - c.b / 3 + c.gamma / 5
    assert exact0.sign() >= 0
    assert majorant_eval(3, 0.0) == pytest.approx(to_float(exact0), abs=1e-14)
    with pytest.raises(ValueError):
        majorant_eval(3, 1.5)


@pytest.mark.parametrize("r", range(2, 25))
def test_majorant_dominates_abs(r):
    u = np.random.default_rng(r).uniform(0, 1, 10_000)
    t = np.concatenate([u, -u])
    a, b, g = majorant_coeffs(r).floats()
    vals = a + b * f2(r, t) - g * f4(r, t)
    assert np.min(vals - np.abs(t)) >= -1e-12
    # float evaluation of the exact polynomial agrees
    p = majorant_polynomial(r)
    assert p(0.3) == pytest.approx(majorant_eval(r, 0.3), abs=1e-13)


def test_mmp_examples():
    assert mmp_bound(3, 2) == pytest.approx(4) == to_float(beta(2)) * 3
    assert mmp_bound(5, 5) == 5
    assert mmp_bound(28, 7) == pytest.approx(70) == to_float(beta(7)) * 28
    with pytest.raises(ValueError):
        mmp_bound(3, 4)


def test_mmp_crossover():
    for r in range(2, 13):
        b = to_float(beta(r))
        m = r * (r + 1) // 2
        for n in range(r, 201):
            if n == m:
                assert abs(b * n - mmp_bound(n, r)) <= 1e-10
            else:
                assert (b * n <= mmp_bound(n, r)) == (n >= m), (r, n)
