import numpy as np
import pytest

from lambdak.kernels import omega
from lambdak.linalg import (JacobiConvergenceError, Projection, SplitMix64, bottom_projection,
                            derive_seed, frobenius_inner, gaussians, jacobi_eigh, kyfan_bottom_sum,
                            l1_norm, orthonormalize, projection_from_eigvecs, random_projection,
                            splitmix64_block, sym_eigen, tensor_inner, uniforms)


def c6():
    a = np.zeros((6, 6))
    for i in range(6):
        a[i, (i + 1) % 6] = a[(i + 1) % 6, i] = 1
    return a


# PRNG --------------------------------------------------------------------


def test_splitmix_reference_values():
    # published test vector for SplitMix64
    g = SplitMix64(1234567)
    assert [g.next() for _ in range(3)] == [6457827717110365317, 3203168211198807973,
                                            9817491932198370423]
    assert SplitMix64(0).next() == 0xE220A8397B1DCDAF


def test_block_matches_scalar():
    g = SplitMix64(99)
    ref = [g.next() for _ in range(50)]
    assert splitmix64_block(99, 50).tolist() == ref
    assert splitmix64_block(99, 10, start=40).tolist() == ref[40:]


def test_uniform_and_gaussian_streams():
    u = uniforms(7, 100_000)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 5e-3
    g = gaussians(7, 100_001)
    assert g.size == 100_001
    assert abs(g.mean()) < 0.01 and abs(g.std() - 1) < 0.01
    assert np.array_equal(gaussians(3, 10), gaussians(3, 10))
    assert derive_seed(1, 0) != derive_seed(1, 1) != derive_seed(2, 1)


# helpers -----------------------------------------------------------------


def test_inner_products():
    assert frobenius_inner(np.eye(3), np.eye(3)) == 3
    assert l1_norm(np.ones((3, 3))) == 9
    assert tensor_inner(omega(3), omega(3)) == pytest.approx(0.2, abs=1e-15)
    with pytest.raises(ValueError):
        frobenius_inner(np.eye(2), np.eye(3))
    with pytest.raises(ValueError):
        tensor_inner(np.zeros((2, 2)), np.zeros((3, 3)))


# Jacobi ------------------------------------------------------------------


def test_eigen_examples():
    j = np.ones((4, 4)) - np.eye(4)
    assert np.allclose(sym_eigen(j).eigenvalues, [3, -1, -1, -1], atol=1e-12)
    assert np.allclose(sym_eigen(np.diag([5.0, 2, 7])).eigenvalues, [7, 5, 2])
    assert np.allclose(sym_eigen(c6()).eigenvalues, [2, 1, 1, -1, -1, -2], atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 10, 37, 80])
def test_jacobi_matches_lapack(n):
    rng = np.random.default_rng(n)
    m = rng.standard_normal((n, n))
    m = m + m.T
    spec = sym_eigen(m)
    ref = np.sort(np.linalg.eigvalsh(m))[::-1]
    scale = max(1.0, np.linalg.norm(m))
    assert np.max(np.abs(spec.eigenvalues - ref)) <= 1e-10 * scale
    v = spec.eigenvectors
    assert np.allclose(v.T @ v, np.eye(n), atol=1e-10)
    assert spec.residual <= 1e-9 * scale


def test_jacobi_batched_and_degenerate():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((20, 5, 5))
    m = m + np.swapaxes(m, 1, 2)
    w, v, _ = jacobi_eigh(m)
    ref = np.sort(np.linalg.eigvalsh(m), axis=1)[:, ::-1]
    assert np.allclose(w, ref, atol=1e-11)
    # repeated eigenvalues and the zero matrix
    for a in (np.eye(6), np.zeros((4, 4)), np.ones((5, 5))):
        spec = sym_eigen(a)
        assert np.allclose(spec.eigenvalues, np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-12)


def test_jacobi_sweep_cap():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((12, 12))
    with pytest.raises(JacobiConvergenceError):
        jacobi_eigh(m + m.T, max_sweeps=1)


def test_sym_eigen_errors():
    with pytest.raises(ValueError):
        sym_eigen(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        sym_eigen(np.eye(2), method="qr")


def test_kyfan_examples():
    assert kyfan_bottom_sum(np.diag([1.0, 2, 3]), 2) == pytest.approx(3)
    assert kyfan_bottom_sum(c6(), 2) == pytest.approx(-3)
    assert kyfan_bottom_sum(np.ones((4, 4)) - np.eye(4), 3) == pytest.approx(-3)
    with pytest.raises(ValueError):
        kyfan_bottom_sum(np.eye(3), 4)


def test_kyfan_is_minimum_over_projections():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((15, 15))
    m = m + m.T
    best = kyfan_bottom_sum(m, 3)
    for s in range(50):
        q = random_projection(15, 3, s).Q
        assert np.trace(m @ q) >= best - 1e-10


# projections -------------------------------------------------------------


def test_projection_examples():
    p = Projection(np.eye(4)[:, :2])
    assert np.trace(p.Q) == pytest.approx(2)
    spec = sym_eigen(c6())
    q = bottom_projection(spec, 2).Q
    assert np.trace(c6() @ q) == pytest.approx(-3)
    q1 = bottom_projection(sym_eigen(np.diag([1.0, 2, 3])), 1).Q
    assert np.allclose(np.abs(q1), np.diag([1.0, 0, 0]))  # eigenvalue 1 is e1 here


def test_random_projection_examples():
    assert np.allclose(random_projection(5, 5, 11).Q, np.eye(5), atol=1e-9)
    p = random_projection(50, 3, 1)
    assert np.trace(p.Q) == pytest.approx(3, abs=1e-9)
    assert np.array_equal(p.B, random_projection(50, 3, 1).B)
    q = p.Q
    assert np.allclose(q @ q, q, atol=1e-12)


def test_projection_validation():
    with pytest.raises(ValueError):
        Projection(np.ones((3, 2)))
    with pytest.raises(ValueError):
        Projection(np.eye(2, 3))
    with pytest.raises(ValueError):
        random_projection(3, 4, 0)
    spec = sym_eigen(np.eye(3))
    with pytest.raises(ValueError):
        projection_from_eigvecs(spec, [0, 0])
    with pytest.raises(ValueError):
        projection_from_eigvecs(spec, [3])
    with pytest.raises(ValueError):
        projection_from_eigvecs(spec, [])


def test_zero_rows_get_a_direction():
    p = Projection(np.eye(5)[:, :2])
    assert np.allclose(np.linalg.norm(p.directions, axis=1), 1)
    assert np.allclose(p.norms, [1, 1, 0, 0, 0])


def test_orthonormalize_detects_collapse():
    g = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])
    assert orthonormalize(g) is None
    b = orthonormalize(np.random.default_rng(0).standard_normal((10, 4)))
    assert np.allclose(b.T @ b, np.eye(4), atol=1e-14)


def test_spectrum_invariants():
    rng = np.random.default_rng(12)
    for n in (4, 25, 60):
        m = rng.standard_normal((n, n))
        m = m + m.T
        w = sym_eigen(m).eigenvalues
        assert np.all(np.diff(w) <= 0)
        assert w.sum() == pytest.approx(np.trace(m), abs=1e-8 * max(1, abs(np.trace(m))))
        assert np.sum(w ** 2) == pytest.approx(np.sum(m * m), rel=1e-8)
        q = random_projection(n, 3, n).Q
        assert np.sum(q * q) == pytest.approx(3, abs=1e-8)
        b = bottom_projection(sym_eigen(m), 3).Q
        assert np.trace(m @ b) == pytest.approx(kyfan_bottom_sum(m, 3), abs=1e-8)
