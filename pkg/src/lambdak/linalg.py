"""Dense symmetric linear algebra used throughout the package.

The eigensolver is a cyclic Jacobi method with round-robin (parallel)
ordering: every round applies n/2 disjoint plane rotations at once, so a
sweep is n-1 vectorized updates. It accepts stacks of matrices, which is how
the exhaustive graph checks diagonalize tens of thousands of small adjacency
matrices in one call.

Randomness comes from SplitMix64 (Steele, Lea & Flood 2014), a counter-style
generator that is trivially reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


class JacobiConvergenceError(RuntimeError):
    def __init__(self, off_norm: float, sweeps: int):
        super().__init__(f"Jacobi did not converge after {sweeps} sweeps "
                         f"(off-diagonal norm {off_norm:.3e})")
        self.off_norm = off_norm
        self.sweeps = sweeps


# --------------------------------------------------------------------------
# PRNG


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Reference scalar SplitMix64."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix64(self.state)


def splitmix64_block(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of ``SplitMix64(seed)`` as uint64."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, stream: int) -> int:
    """Independent child seed for sub-stream ``stream``."""
    return _mix64((_mix64(seed & MASK64) + (stream + 1) * GOLDEN_GAMMA) & MASK64)


def uniforms(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Doubles in [0, 1) from the top 53 bits."""
    return (splitmix64_block(seed, count, start) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def gaussians(seed: int, count: int) -> np.ndarray:
    """Standard normals by Box-Muller on consecutive uniform pairs."""
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs)
    u1 = 1.0 - u[0::2]  # (0, 1]
    u2 = u[1::2]
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = rad * np.cos(ang)
    out[1::2] = rad * np.sin(ang)
    return out[:count]


# --------------------------------------------------------------------------
# basic matrix helpers


def as_symmetric(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return (a + a.T) / 2.0


def frobenius_inner(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def l1_norm(a) -> float:
    return float(np.abs(np.asarray(a, dtype=float)).sum())


def tensor_inner(t, s) -> float:
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if t.ndim != 4 or t.shape != s.shape:
        raise ValueError(f"expected matching 4-tensors, got {t.shape} and {s.shape}")
    return float(np.sum(t * s))


# --------------------------------------------------------------------------
# Jacobi eigensolver


@lru_cache(maxsize=None)
def _round_robin(n: int):
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    off = a * (1.0 - np.eye(n))
    return np.sqrt(np.sum(off * off, axis=(-2, -1)))


def _rotate_rows(x: np.ndarray, p, q, c, s) -> None:
    xp = np.take(x, p, axis=1)
    xq = np.take(x, q, axis=1)
    t1 = c * xp
    t1 -= s * xq
    xq *= c
    xp *= s
    xq += xp
    x[:, p, :] = t1
    x[:, q, :] = xq


def jacobi_eigh(m, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decompose a symmetric matrix or a stack of them.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues sorted
    descending along the last axis and eigenvectors as columns.
    """
    a = np.array(m, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected (..., n, n), got {a.shape}")
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    if n == 0:
        raise ValueError("empty matrix")
    a = a.reshape((-1, n, n))
    a = (a + np.swapaxes(a, -1, -2)) / 2.0
    v = np.broadcast_to(np.eye(n), a.shape).copy()
    scale = np.sqrt(np.sum(a * a, axis=(-2, -1)))
    target = tol * scale
    rounds = _round_robin(n)
    sweeps = 0
    off = _off_norm(a)
    while np.any(off > target) and n > 1:
        if sweeps >= max_sweeps:
            raise JacobiConvergenceError(float(np.max(off)), sweeps)
        todo = np.nonzero(off > target)[0]
        sub_a = a[todo]
        sub_vt = np.ascontiguousarray(np.swapaxes(v[todo], -1, -2))
        # rotations this small cannot move any entry by more than rounding
        negligible = (1e-18 * scale[todo])[:, None]
        for p_all, q_all in rounds:
            if p_all.size == 0:
                continue
            apq = sub_a[:, p_all, q_all]
            active = np.abs(apq) > negligible
            keep = np.any(active, axis=0)
            if not keep.any():
                continue
            p, q = p_all[keep], q_all[keep]
            apq, active = apq[:, keep], active[:, keep]
            app = sub_a[:, p, p]
            aqq = sub_a[:, q, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = np.where(active, (aqq - app) / (2.0 * apq), 0.0)
                big = np.abs(theta) > 1e150
                t = np.where(big, 0.5 / theta,
                             np.sign(theta + (theta == 0)) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cr = c[:, :, None]
            sr = s[:, :, None]
            # A' = R^T A R computed as two row rotations around a transpose;
            # eigenvectors are kept transposed so they only need row updates.
            _rotate_rows(sub_a, p, q, cr, sr)
            sub_a = np.ascontiguousarray(np.swapaxes(sub_a, -1, -2))
            _rotate_rows(sub_a, p, q, cr, sr)
            sub_a[:, p, q] = 0.0
            sub_a[:, q, p] = 0.0
            _rotate_rows(sub_vt, p, q, cr, sr)
        a[todo] = sub_a
        v[todo] = np.swapaxes(sub_vt, -1, -2)
        sweeps += 1
        off = _off_norm(a)
    w = np.diagonal(a, axis1=-2, axis2=-1).copy()
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return w.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n)), sweeps


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # columns
    residual: float
    sweeps: int = 0

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def bottom_sum(self, r: int) -> float:
        return float(np.sum(self.eigenvalues[self.n - r:]))


def sym_eigen(m, method: str = "jacobi") -> Spectrum:
    """Full descending eigendecomposition of a symmetric matrix.

    ``method="jacobi"`` is the in-house solver; ``"lapack"`` delegates to
    ``numpy.linalg.eigh`` and exists as an independent cross-check and for
    large batch work.
    """
    a = as_symmetric(m)
    if a.shape[0] < 1:
        raise ValueError("n must be >= 1")
    if method == "jacobi":
        w, vecs, sweeps = jacobi_eigh(a)
    elif method == "lapack":
        w, vecs = np.linalg.eigh(a)
        w, vecs, sweeps = w[::-1].copy(), vecs[:, ::-1].copy(), 0
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    res = a @ vecs - vecs * w
    residual = float(np.max(np.linalg.norm(res, axis=0)))
    return Spectrum(w, vecs, residual, sweeps)


def kyfan_bottom_sum(m, r: int, method: str = "jacobi") -> float:
    """Sum of the ``r`` smallest eigenvalues, i.e. min of tr(MQ) over rank-r projections."""
    a = as_symmetric(m)
    n = a.shape[0]
    if not 1 <= r <= n:
        raise ValueError(f"r must satisfy 1 <= r <= {n}, got {r}")
    return sym_eigen(a, method).bottom_sum(r)


# --------------------------------------------------------------------------
# projections


@dataclass(frozen=True)
class Projection:
    """Rank-r orthogonal projection Q = B B^T, B with orthonormal columns."""

    B: np.ndarray
    norms: np.ndarray = field(init=False, repr=False)
    directions: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b = np.array(self.B, dtype=float)
        if b.ndim != 2 or b.shape[1] < 1 or b.shape[1] > b.shape[0]:
            raise ValueError(f"factor must be n x r with 1 <= r <= n, got {b.shape}")
        err = np.max(np.abs(b.T @ b - np.eye(b.shape[1])))
        if err > 1e-10:
            raise ValueError(f"factor columns are not orthonormal (max error {err:.2e})")
        b.setflags(write=False)
        object.__setattr__(self, "B", b)
        c = np.linalg.norm(b, axis=1)
        u = np.zeros_like(b)
        nz = c > 0
        u[nz] = b[nz] / c[nz, None]
        u[~nz, 0] = 1.0  # zero rows: any unit vector will do
        object.__setattr__(self, "norms", c)
        object.__setattr__(self, "directions", u)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def r(self) -> int:
        return self.B.shape[1]

    @property
    def Q(self) -> np.ndarray:
        return self.B @ self.B.T


def orthonormalize(g: np.ndarray, rtol: float = 1e-10) -> np.ndarray | None:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Returns None if a column collapses (relative norm below ``rtol``).
    """
    b = np.array(g, dtype=float)
    for j in range(b.shape[1]):
        col = b[:, j]
        orig = np.linalg.norm(col)
        for _ in range(2):
            for i in range(j):
                col = col - (b[:, i] @ col) * b[:, i]
        nrm = np.linalg.norm(col)
        if orig == 0 or nrm <= rtol * orig:
            return None
        b[:, j] = col / nrm
    return b


def random_projection(n: int, r: int, seed: int, max_attempts: int = 8) -> Projection:
    """Seeded rank-r projection from orthonormalized Gaussian columns."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    for attempt in range(max_attempts):
        g = gaussians(derive_seed(seed, attempt), n * r).reshape(n, r)
        b = orthonormalize(g)
        if b is not None:
            return Projection(b)
    raise RuntimeError(f"could not draw a full-rank {n}x{r} Gaussian matrix in {max_attempts} attempts")


def projection_from_eigvecs(spec: Spectrum, indices: Sequence[int]) -> Projection:
    """Projection onto the span of the chosen eigenvector columns (0-based, descending order)."""
    idx = list(indices)
    if not idx:
        raise ValueError("need at least one index")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate indices in {idx}")
    bad = [i for i in idx if not 0 <= i < spec.n]
    if bad:
        raise ValueError(f"indices out of range 0..{spec.n - 1}: {bad}")
    return Projection(spec.eigenvectors[:, idx])


def bottom_projection(spec: Spectrum, r: int) -> Projection:
    return projection_from_eigvecs(spec, range(spec.n - r, spec.n))
