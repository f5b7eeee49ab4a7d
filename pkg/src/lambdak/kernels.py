"""Positive kernels on the sphere and their Gram realizations.

``f2(r, t) = t^2 - 1/r`` and ``f4(r, t) = t^4 - 3/(r(r+2))`` are positive
semidefinite on S^{r-1}. Both are certified by writing the kernel matrix as a
Gram matrix: ``phi(u) = uu^T - I/r`` for f2 and ``psi(u) = u^{x4} - Omega``
for f4, with ``Omega`` the normalized symmetric tensor built from Kronecker
deltas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import QuadPoly
from .linalg import sym_eigen

UNIT_TOL = 1e-12
KERNELS = ("f2", "f4")


def _check_r(r: int) -> None:
    if r < 2:
        raise ValueError(f"sphere dimension r must be >= 2, got {r}")


def f2(r: int, t):
    _check_r(r)
    if isinstance(t, (int, Fraction)):
        return Fraction(t) ** 2 - Fraction(1, r)
    return t * t - 1.0 / r


def f4(r: int, t):
    _check_r(r)
    if isinstance(t, (int, Fraction)):
        return Fraction(t) ** 4 - Fraction(3, r * (r + 2))
    t2 = t * t
    return t2 * t2 - 3.0 / (r * (r + 2))


def f2_poly(r: int, d: int) -> QuadPoly:
    """``f2`` as an exact polynomial in t with coefficients over Q[sqrt(d)]."""
    _check_r(r)
    return QuadPoly([Fraction(-1, r), 0, 1], d)


def f4_poly(r: int, d: int) -> QuadPoly:
    _check_r(r)
    return QuadPoly([Fraction(-3, r * (r + 2)), 0, 0, 0, 1], d)


def kernel(name: str):
    try:
        return {"f2": f2, "f4": f4}[name]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; expected one of {KERNELS}") from None


def unit_vector(coords) -> np.ndarray:
    u = np.asarray(coords, dtype=float)
    if u.ndim != 1:
        raise ValueError("unit vector must be one-dimensional")
    err = abs(np.linalg.norm(u) - 1.0)
    if err > UNIT_TOL:
        raise ValueError(f"vector is not unit length (| |u| - 1 | = {err:.2e})")
    return u


def random_unit_vectors(count: int, r: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, r))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def phi(u) -> np.ndarray:
    u = unit_vector(u)
    r = u.size
    _check_r(r)
    return np.outer(u, u) - np.eye(r) / r


def omega(r: int) -> np.ndarray:
    _check_r(r)
    eye = np.eye(r)
    c = (np.einsum("ij,kl->ijkl", eye, eye)
         + np.einsum("ik,jl->ijkl", eye, eye)
         + np.einsum("il,jk->ijkl", eye, eye))
    return c / (r * (r + 2))


def psi(u) -> np.ndarray:
    u = unit_vector(u)
    _check_r(u.size)
    return np.einsum("i,j,k,l->ijkl", u, u, u, u) - omega(u.size)


@dataclass(frozen=True)
class KernelGram:
    points: np.ndarray       # (n, r), unit rows
    matrix: np.ndarray       # M_ij = f(<u_i, u_j>)
    kernel: str
    min_eigenvalue: float

    def is_psd(self, tol: float = 1e-8) -> bool:
        return self.min_eigenvalue >= -tol


def gram(kernel_name: str, points, method: str = "jacobi") -> KernelGram:
    """Kernel matrix of ``points`` with its minimum eigenvalue as PSD certificate."""
    f = kernel(kernel_name)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a non-empty list of vectors of equal dimension")
    r = pts.shape[1]
    _check_r(r)
    errs = np.abs(np.linalg.norm(pts, axis=1) - 1.0)
    if np.any(errs > UNIT_TOL):
        raise ValueError(f"point {int(np.argmax(errs))} is not on the unit sphere")
    t = np.clip(pts @ pts.T, -1.0, 1.0)
    m = f(r, t)
    m = (m + m.T) / 2.0
    lam_min = float(sym_eigen(m, method).eigenvalues[-1])
    return KernelGram(pts, m, kernel_name, lam_min)


def feature_rows(kernel_name: str, points) -> np.ndarray:
    """Flattened phi(u_i) (f2) or psi(u_i) (f4) as rows, so rows @ rows.T realizes the kernel."""
    pts = np.asarray(points, dtype=float)
    r = pts.shape[1]
    _check_r(r)
    if kernel_name == "f2":
        feats = np.einsum("ni,nj->nij", pts, pts) - np.eye(r) / r
    elif kernel_name == "f4":
        feats = np.einsum("ni,nj,nk,nl->nijkl", pts, pts, pts, pts) - omega(r)
    else:
        raise ValueError(f"unknown kernel {kernel_name!r}; expected one of {KERNELS}")
    return feats.reshape(pts.shape[0], -1)


def realization_residual(kernel_name: str, points) -> float:
    """Max |<feature_i, feature_j> - f(<u_i, u_j>)| over all pairs."""
    pts = np.asarray(points, dtype=float)
    x = feature_rows(kernel_name, pts)
    m = kernel(kernel_name)(pts.shape[1], np.clip(pts @ pts.T, -1.0, 1.0))
    return float(np.max(np.abs(x @ x.T - m)))


def gegenbauer_normalized(ell: int, r: int, t):
    """Gegenbauer polynomial of degree ``ell`` for lambda = r/2 - 1, scaled to equal 1 at t = 1."""
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    if r < 3:
        raise ValueError("r must be >= 3 (lambda = r/2 - 1 vanishes at r = 2)")
    lam = r / 2.0 - 1.0

    def raw(x):
        prev = np.ones_like(x, dtype=float)
        if ell == 0:
            return prev
        cur = 2.0 * lam * x
        for k in range(1, ell):
            prev, cur = cur, (2.0 * (k + lam) * x * cur - (k + 2.0 * lam - 1.0) * prev) / (k + 1)
        return cur

    x = np.asarray(t, dtype=float)
    out = raw(x) / raw(np.ones(()))
    return float(out) if out.ndim == 0 else out


def check_gegenbauer_decomposition(r: int, samples: int = 1000) -> float:
    """Max residual of the degree-2 and degree-4 expansions of f2, f4 over [-1, 1]."""
    t = np.linspace(-1.0, 1.0, samples)
    g2 = gegenbauer_normalized(2, r, t)
    g4 = gegenbauer_normalized(4, r, t)
    res2 = f2(r, t) - (r - 1) / r * g2
    res4 = f4(r, t) - ((r - 1) * (r + 1) / ((r + 2) * (r + 4)) * g4 + 6.0 / (r + 4) * f2(r, t))
    return float(max(np.max(np.abs(res2)), np.max(np.abs(res4))))


def weighted_kernel_form(kernel_name: str, points, weights: Sequence[float]) -> float:
    """``sum_ij c_i c_j f(<u_i, u_j>)`` for nonnegative weights ``c``."""
    pts = np.asarray(points, dtype=float)
    c = np.asarray(weights, dtype=float)
    if np.any(c < 0):
        raise ValueError("weights must be nonnegative")
    m = kernel(kernel_name)(pts.shape[1], np.clip(pts @ pts.T, -1.0, 1.0))
    return float(c @ m @ c)
