from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_gegenbauer, eval_legendre

from lambdak.exact import QuadExt
from lambdak.kernels import (check_gegenbauer_decomposition, f2, f2_poly, f4, f4_poly,
                             gegenbauer_normalized, gram, kernel, omega, phi, psi,
                             random_unit_vectors, unit_vector, weighted_kernel_form)
from lambdak.linalg import frobenius_inner, tensor_inner


def test_kernel_values():
    assert f2(2, 1) == Fraction(1, 2)
    assert f4(2, 0) == Fraction(-3, 8)
    assert f2(3, 1 / np.sqrt(5)) == pytest.approx(-2 / 15, abs=1e-15)
    assert f2_poly(3, 5)(QuadExt(0, Fraction(1, 5), 5)) == Fraction(-2, 15)
    assert f4_poly(2, 4)(1) == 1 - Fraction(3, 8)
    assert kernel("f4") is f4
    with pytest.raises(ValueError):
        kernel("f6")
    with pytest.raises(ValueError):
        f2(1, 0.5)


def test_phi_examples():
    assert np.allclose(phi([1.0, 0.0]), [[0.5, 0], [0, -0.5]])
    rng = np.random.default_rng(2)
    for r in (2, 3, 6):
        u, v = random_unit_vectors(2, r, rng)
        assert abs(np.trace(phi(u))) < 1e-15
        assert frobenius_inner(phi(u), phi(v)) == pytest.approx(f2(r, u @ v), abs=1e-13)
    with pytest.raises(ValueError):
        phi([1.0, 1.0])


def test_omega_and_psi():
    assert omega(2)[0, 0, 0, 0] == pytest.approx(3 / 8)
    for r in range(2, 9):
        assert tensor_inner(omega(r), omega(r)) == pytest.approx(3 / (r * (r + 2)), abs=1e-14)
    rng = np.random.default_rng(3)
    for r in (2, 3, 5):
        u, v = random_unit_vectors(2, r, rng)
        assert tensor_inner(psi(u), psi(v)) == pytest.approx(f4(r, u @ v), abs=1e-13)
        # psi(u) is orthogonal to Omega, the same fact that makes the Gram PSD
        assert abs(tensor_inner(psi(u), omega(r))) < 1e-14


def test_gram_examples():
    g = gram("f2", [[1.0, 0.0], [0.0, 1.0]])
    assert np.allclose(g.matrix, [[0.5, -0.5], [-0.5, 0.5]])
    assert g.min_eigenvalue == pytest.approx(0, abs=1e-15)
    g1 = gram("f4", [[1.0, 0.0, 0.0]])
    assert g1.matrix[0, 0] == pytest.approx(0.8)
    rng = np.random.default_rng(4)
    pts = random_unit_vectors(100, 5, rng)
    for name in ("f2", "f4"):
        assert gram(name, pts).is_psd(1e-8)


def test_gram_jacobi_agrees_with_lapack():
    pts = random_unit_vectors(60, 4, np.random.default_rng(8))
    for name in ("f2", "f4"):
        a = gram(name, pts).min_eigenvalue
        b = gram(name, pts, method="lapack").min_eigenvalue
        assert a == pytest.approx(b, abs=1e-10)


def test_gram_validation():
    with pytest.raises(ValueError):
        gram("f2", [[1.0, 1.0]])
    with pytest.raises(ValueError):
        gram("f2", np.zeros((0, 3)))
    with pytest.raises(ValueError):
        unit_vector([[1.0]])


def test_weighted_form_nonnegative():
    rng = np.random.default_rng(6)
    pts = random_unit_vectors(30, 3, rng)
    c = rng.random(30)
    assert weighted_kernel_form("f2", pts, c) >= -1e-12
    assert weighted_kernel_form("f4", pts, c) >= -1e-12
    with pytest.raises(ValueError):
        weighted_kernel_form("f2", pts, -c)


def test_gegenbauer_basics():
    t = np.linspace(-1, 1, 11)
    assert np.allclose(gegenbauer_normalized(2, 3, t), (3 * t ** 2 - 1) / 2)
    assert np.allclose(gegenbauer_normalized(0, 5, t), 1)
    for ell in range(6):
        for r in (3, 4, 9):
            assert gegenbauer_normalized(ell, r, 1.0) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        gegenbauer_normalized(2, 2, 0.5)


@pytest.mark.parametrize("r", range(3, 13))
def test_gegenbauer_against_scipy(r):
    t = np.linspace(-1, 1, 201)
    lam = r / 2 - 1
    for ell in range(7):
        ref = eval_gegenbauer(ell, lam, t) / eval_gegenbauer(ell, lam, 1.0)
        assert np.allclose(gegenbauer_normalized(ell, r, t), ref, atol=1e-13)


def test_legendre_case_r3():
    t = np.linspace(-1, 1, 1000)
    assert np.allclose(gegenbauer_normalized(4, 3, t), eval_legendre(4, t), atol=1e-14)
    # hand expansion: f4(3,t) = 8/35 P4 + 6/7 f2(3,t); f2(3,t) = 2/3 P2
    p2 = (3 * t ** 2 - 1) / 2
    p4 = (35 * t ** 4 - 30 * t ** 2 + 3) / 8
    assert np.max(np.abs(f2(3, t) - 2 / 3 * p2)) <= 1e-12
    assert np.max(np.abs(f4(3, t) - (8 / 35 * p4 + 6 / 7 * f2(3, t)))) <= 1e-12
    assert check_gegenbauer_decomposition(3) <= 1e-12


@pytest.mark.parametrize("r", range(3, 13))
def test_decomposition(r):
    assert check_gegenbauer_decomposition(r) <= 1e-10
